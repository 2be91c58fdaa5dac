/** End-to-end: spawn the real Python service, replay the fixture job through
 * the HTTP interface (the same path the browser uses), and require the
 * served trace and export to match the recorded engine/CLI outputs exactly. */

import { spawn, ChildProcess } from "node:child_process";
import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import type { JobPayload } from "../src/types.js";

const HERE = dirname(fileURLToPath(import.meta.url));
const REPO_ROOT = join(HERE, "..", "..");
const PORT = 8911;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess | null = null;

async function waitForServer(timeoutMs = 20_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(`${BASE}/embeddings`);
      if (resp.ok) return;
    } catch {
      /* not up yet */
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error("service did not come up in time");
}

beforeAll(async () => {
  server = spawn(
    "python3",
    ["-m", "debiaskit.cli", "serve", "--port", String(PORT)],
    {
      cwd: REPO_ROOT,
      env: { ...process.env, PYTHONPATH: join(REPO_ROOT, "src") },
      stdio: "ignore",
    },
  );
  await waitForServer();
}, 30_000);

afterAll(() => {
  server?.kill();
});

describe("against the live service", () => {
  const job: JobPayload = JSON.parse(
    readFileSync(join(HERE, "fixtures", "lp_job.json"), "utf-8"),
  );
  const expectedTrace = JSON.parse(
    readFileSync(join(HERE, "fixtures", "lp_trace.json"), "utf-8"),
  );
  const expectedExport = readFileSync(join(HERE, "fixtures", "lp_export_cli.txt"), "utf-8");

  it("replays the fixture job and export byte-for-byte", async () => {
    const client = new ApiClient(BASE);
    const names = await client.embeddings();
    expect(names.embeddings).toContain("glove50-default");

    const info = await client.createSession("glove50-default");
    expect(info.dim).toBe(50);

    const resp = await client.runJob(info.session_id, job);
    expect(resp.trace.frames).toHaveLength(4);
    expect(resp).toEqual(expectedTrace);

    const exported = await client.exportText(info.session_id, "glove_text");
    expect(exported).toBe(expectedExport);
  }, 30_000);

  it("reports missing tokens through the error path", async () => {
    const client = new ApiClient(BASE);
    const info = await client.createSession("glove50-default");
    const bad = { ...job, evaluation: [...job.evaluation, "zzznope"] };
    await expect(client.runJob(info.session_id, bad)).rejects.toMatchObject({
      status: 422,
      missing: ["zzznope"],
    });
  }, 30_000);

  it("neighbors differ before and after debiasing", async () => {
    const client = new ApiClient(BASE);
    const info = await client.createSession("glove50-default");
    await client.runJob(info.session_id, job);
    const before = await client.neighbors(info.session_id, "nurse", 5, "before");
    const after = await client.neighbors(info.session_id, "nurse", 5, "after");
    expect(before.snapshot_id).not.toBe(after.snapshot_id);
    expect(before.neighbors).toHaveLength(5);
    expect(after.neighbors).toHaveLength(5);
  }, 30_000);
});
