import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("ApiClient", () => {
  it("posts session creation and parses the result", async () => {
    const fetchMock = vi.fn().mockResolvedValue(
      jsonResponse(201, { session_id: "s1", vocab_size: 10, dim: 50, snapshot_id: "x" }),
    );
    vi.stubGlobal("fetch", fetchMock);
    const client = new ApiClient("http://host");
    const info = await client.createSession("glove50-default");
    expect(info.session_id).toBe("s1");
    expect(fetchMock).toHaveBeenCalledWith(
      "http://host/sessions",
      expect.objectContaining({ method: "POST" }),
    );
    const body = JSON.parse(fetchMock.mock.calls[0][1].body as string);
    expect(body).toEqual({ embedding: "glove50-default" });
  });

  it("surfaces the complete missing-token list on 422", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn().mockResolvedValue(
        jsonResponse(422, {
          detail: { message: "unknown tokens: a, b", missing: ["a", "b"] },
        }),
      ),
    );
    const client = new ApiClient();
    await expect(client.runJob("s1", {} as never)).rejects.toMatchObject({
      status: 422,
      missing: ["a", "b"],
    });
  });

  it("keeps plain string details", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn().mockResolvedValue(jsonResponse(409, { detail: "hard debiasing requires an equalize set" })),
    );
    const client = new ApiClient();
    const err = await client.runJob("s1", {} as never).catch((e) => e as ApiError);
    expect(err.status).toBe(409);
    expect(err.message).toContain("equalize");
  });

  it("returns raw text from export", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn().mockResolvedValue(new Response("tok 1.0 2.0\n", { status: 200 })),
    );
    const client = new ApiClient();
    expect(await client.exportText("s1", "glove_text")).toBe("tok 1.0 2.0\n");
  });
});
