/**
 * Optimistic mutation helper.
 *
 * apply() runs immediately and returns a snapshot, remote() performs the
 * request, revert(snapshot) undoes the local change if remote() rejects.
 * Resolves true when the remote operation was acknowledged.
 */

export interface OptimisticOptions<T> {
  apply: () => T;
  remote: () => Promise<void>;
  revert: (snapshot: T) => void;
  onError?: (error: unknown) => void;
}

export async function optimistic<T>(options: OptimisticOptions<T>): Promise<boolean> {
  const snapshot = options.apply();
  try {
    await options.remote();
    return true;
  } catch (error) {
    options.revert(snapshot);
    options.onError?.(error);
    return false;
  }
}
