import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { FakeAnnotationService } from "./fake-service.js";
import { TEN_PAIRS } from "./fixture.js";

function makeClient(): { client: ApiClient; fake: FakeAnnotationService } {
  const fake = new FakeAnnotationService(TEN_PAIRS);
  const client = new ApiClient("http://fake.test", fake.handler);
  return { client, fake };
}

describe("ApiClient", () => {
  it("fetches the next task with annotator metadata", async () => {
    const { client } = makeClient();
    const next = await client.nextTask("anna");
    expect(next.task?.pair_id).toBe("p00");
    expect(next.task?.annotator_id).toBe("anna");
    expect(next.task?.served_at).toBeTruthy();
    expect(next.remaining).toBe(10);
  });

  it("submits a label and parses the acknowledgment", async () => {
    const { client } = makeClient();
    const ack = await client.submitLabel("p00", "anna", "yes");
    expect(ack).toMatchObject({ ok: true, pair_id: "p00", annotator: "anna", label: "yes", labeled: 1 });
  });

  it("raises ApiError with the service detail on 422", async () => {
    const { client, fake } = makeClient();
    fake.failNextLabel = { status: 422, detail: "label must be one of ('yes', 'inflected', 'no'), got 'maybe'" };
    const err = await client.submitLabel("p00", "anna", "yes").catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(422);
    expect((err as ApiError).message).toContain("label must be one of");
  });

  it("raises ApiError 404 for an unknown pair", async () => {
    const { client } = makeClient();
    const err = await client.submitLabel("nope", "anna", "yes").catch((e: unknown) => e);
    expect((err as ApiError).status).toBe(404);
    expect((err as ApiError).message).toContain("unknown pair_id");
  });

  it("raises ApiError 422 for a blank annotator on next", async () => {
    const { client } = makeClient();
    const err = await client.nextTask("  ").catch((e: unknown) => e);
    expect((err as ApiError).status).toBe(422);
  });

  it("maps a network failure to status 0", async () => {
    const client = new ApiClient("http://fake.test", () =>
      Promise.reject(new TypeError("fetch failed")),
    );
    const err = await client.progress().catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(0);
    expect((err as ApiError).message).toBe("fetch failed");
  });

  it("falls back to HTTP status text when the error body is not JSON", async () => {
    const client = new ApiClient("http://fake.test", () =>
      Promise.resolve(new Response("<html>boom</html>", { status: 500 })),
    );
    const err = await client.progress().catch((e: unknown) => e);
    expect((err as ApiError).status).toBe(500);
    expect((err as ApiError).message).toBe("HTTP 500");
  });

  it("normalizes a trailing slash in the base URL", async () => {
    const fake = new FakeAnnotationService(TEN_PAIRS);
    const client = new ApiClient("http://fake.test/", fake.handler);
    await client.progress();
    expect(fake.requests[0]).toBe("GET http://fake.test/api/progress");
  });

  it("skip acknowledges and the skipped pair is not served again", async () => {
    const { client } = makeClient();
    await client.skipTask("p00", "anna");
    const next = await client.nextTask("anna");
    expect(next.task?.pair_id).toBe("p01");
    expect(next.remaining).toBe(9);
  });

  it("labeling a skipped pair clears the skip", async () => {
    const { client, fake } = makeClient();
    await client.skipTask("p00", "anna");
    await client.submitLabel("p00", "anna", "no");
    expect(fake.skips.get("anna")?.has("p00")).toBe(false);
  });

  it("agreement is null kappa below two annotators", async () => {
    const { client } = makeClient();
    await client.submitLabel("p00", "anna", "yes");
    const agreement = await client.agreement();
    expect(agreement).toEqual({ kappa: null, n_items: 0, n_annotators: 1 });
  });

  it("pair detail returns newest-wins labels", async () => {
    const { client } = makeClient();
    await client.submitLabel("p00", "anna", "yes");
    await client.submitLabel("p00", "anna", "no");
    const detail = await client.pairDetail("p00");
    expect(detail.labels).toEqual({ anna: "no" });
  });
});
