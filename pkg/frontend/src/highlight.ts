/**
 * Term highlighting for context snippets.
 *
 * Matching is literal and case-sensitive: the term is wrapped exactly
 * where the snippet string contains it, with no normalization, so the
 * display never disagrees with what the service sent.
 */

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;")
    .replaceAll("'", "&#39;");
}

export function highlightTerm(snippet: string, term: string): string {
  if (term === "" || !snippet.includes(term)) {
    return escapeHtml(snippet);
  }
  const marked = `<mark>${escapeHtml(term)}</mark>`;
  return snippet.split(term).map(escapeHtml).join(marked);
}
