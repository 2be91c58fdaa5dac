/** Application wiring: control panel, animated embedding view, explanation
 * panel, neighbor inspection, and export. All embedding math lives on the
 * server; this file only moves frames around. */

import { ApiClient, ApiError } from "./api.js";
import { interpolateFrame, ViewTransform } from "./geometry.js";
import { buildScene, traceTransform } from "./scene.js";
import { drawScene } from "./render.js";
import * as state from "./state.js";
import type { FrameDto, JobPayload, Preset, Toggles } from "./types.js";

const ANIMATION_MS = 750;
const VIEWPORT = { width: 640, height: 560, margin: 36 };

const api = new ApiClient("");
let ui = state.initialState();
let transform: ViewTransform | null = null;
let presets: Preset[] = [];
let animating = false;

function $(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

const svg = $("embedding-view") as unknown as SVGSVGElement;

function showError(err: unknown): void {
  const banner = $("error-banner");
  if (err instanceof ApiError) {
    let text = err.message;
    if (err.missing.length) text += `\nmissing tokens: ${err.missing.join(", ")}`;
    banner.textContent = text;
  } else {
    banner.textContent = String(err);
  }
  banner.classList.remove("hidden");
}

function clearError(): void {
  $("error-banner").classList.add("hidden");
}

function parseTokens(id: string): string[] {
  return ($(id) as HTMLTextAreaElement).value
    .split(/[\s,]+/)
    .map((t) => t.trim())
    .filter(Boolean);
}

function parsePairs(id: string): string[][] {
  return ($(id) as HTMLTextAreaElement).value
    .split(/[\n,]+/)
    .map((item) => item.trim())
    .filter(Boolean)
    .map((item) => item.split(":").map((t) => t.trim()));
}

function toggles(): Toggles {
  return {
    labels: ($("toggle-labels") as HTMLInputElement).checked,
    direction: ($("toggle-direction") as HTMLInputElement).checked,
    evaluation: ($("toggle-evaluation") as HTMLInputElement).checked,
  };
}

function renderFrame(frame: FrameDto): void {
  if (!transform) return;
  const scene = buildScene(frame, toggles(), transform, VIEWPORT);
  drawScene(svg, scene, onTokenClick, ui.selectedToken);
}

function renderCurrent(): void {
  const frame = state.currentFrame(ui);
  if (!frame || !ui.trace) {
    $("step-label").textContent = "no trace";
    return;
  }
  renderFrame(frame);
  const n = state.frameCount(ui);
  $("step-label").textContent = `step ${frame.step_index} of 0–${n - 1}`;
  $("step-title").textContent = frame.step_label;
  $("step-description").textContent = frame.description;
}

function renderMetrics(): void {
  const fmt = (x: number | undefined | null) =>
    x === undefined || x === null ? "–" : x.toFixed(3);
  const before = ui.trace?.metrics_before;
  const after = ui.trace?.metrics_after;
  $("weat-before").textContent = fmt(before?.weat);
  $("ect-before").textContent = fmt(before?.ect);
  $("weat-after").textContent = fmt(after?.weat);
  $("ect-after").textContent = fmt(after?.ect);
}

function animateTo(targetIndex: number): void {
  if (!ui.trace || animating) return;
  const from = state.currentFrame(ui);
  const clamped = state.clampIndex(ui, targetIndex);
  if (!from || clamped === ui.frameIndex) return;
  const to = ui.trace.frames[clamped];
  animating = true;
  const start = performance.now();
  const tick = (now: number) => {
    const t = Math.min(1, (now - start) / ANIMATION_MS);
    renderFrame(interpolateFrame(from, to, t));
    if (t < 1) {
      requestAnimationFrame(tick);
    } else {
      animating = false;
      ui = { ...ui, frameIndex: clamped };
      renderCurrent();
    }
  };
  requestAnimationFrame(tick);
}

async function playAll(): Promise<void> {
  if (!ui.trace || animating) return;
  ui = state.firstFrame(ui);
  renderCurrent();
  for (let i = 1; i < state.frameCount(ui); i++) {
    animateTo(i);
    while (animating) {
      await new Promise((resolve) => setTimeout(resolve, 40));
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
}

async function onTokenClick(token: string): Promise<void> {
  const sessionId = ui.sessionId;
  if (!sessionId) return;
  ui = { ...ui, selectedToken: token };
  renderCurrent();
  $("neighbor-token").textContent = `neighbors of "${token}"`;
  const [next, ticket] = state.beginRequest(ui);
  ui = next;
  try {
    const [before, after] = await Promise.all([
      api.neighbors(sessionId, token, 8, "before"),
      api.neighbors(sessionId, token, 8, "after"),
    ]);
    if (!state.isCurrentRequest(ui, ticket)) return; // stale
    for (const [id, data] of [
      ["neighbors-before", before],
      ["neighbors-after", after],
    ] as const) {
      const list = $(id);
      list.innerHTML = "";
      for (const [tok, sim] of data.neighbors) {
        const li = document.createElement("li");
        li.textContent = `${tok} (${sim.toFixed(3)})`;
        list.appendChild(li);
      }
    }
  } catch (err) {
    showError(err);
  }
}

function currentJob(): JobPayload {
  const method = ($("method-select") as HTMLSelectElement).value;
  const subspace = ($("subspace-select") as HTMLSelectElement).value;
  const job: JobPayload = {
    method,
    subspace_method: subspace,
    evaluation: parseTokens("evaluation"),
    label: ($("label-input") as HTMLInputElement).value || "concept",
    metrics: ($("with-metrics") as HTMLInputElement).checked,
  };
  const seedsF = parseTokens("seeds-f");
  const seedsM = parseTokens("seeds-m");
  const pairs = parsePairs("seed-pairs");
  const equalize = parsePairs("equalize");
  const second = parseTokens("second-seeds");
  if (seedsF.length) job.seeds_f = seedsF;
  if (seedsM.length) job.seeds_m = seedsM;
  if (pairs.length) job.seed_pairs = pairs;
  if (equalize.length) job.equalize = equalize;
  if (second.length) job.second_seeds = second;
  return job;
}

async function runJob(): Promise<void> {
  const sessionId = ui.sessionId;
  if (!sessionId) return;
  clearError();
  const [next, ticket] = state.beginRequest(ui);
  ui = next;
  try {
    const resp = await api.runJob(sessionId, currentJob());
    if (!state.isCurrentRequest(ui, ticket)) return;
    ui = state.withTrace(ui, resp.trace);
    transform = traceTransform(resp.trace.frames, VIEWPORT);
    renderCurrent();
    renderMetrics();
  } catch (err) {
    showError(err);
  }
}

async function newSession(): Promise<void> {
  clearError();
  const name = ($("embedding-select") as HTMLSelectElement).value;
  try {
    const info = await api.createSession(name);
    ui = { ...state.initialState(), sessionId: info.session_id };
    transform = null;
    $("session-info").textContent =
      `session ${info.session_id} · ${info.vocab_size} words × ${info.dim}d (${name})`;
    renderCurrent();
    renderMetrics();
  } catch (err) {
    showError(err);
  }
}

function applyPreset(name: string): void {
  const preset = presets.find((p) => p.name === name);
  if (!preset) return;
  const job = preset.job as Record<string, unknown>;
  const set = (id: string, value: unknown) => {
    ($(id) as HTMLInputElement | HTMLTextAreaElement).value = value as string;
  };
  set("method-select", job.method ?? "lp");
  set("subspace-select", job.subspace_method ?? "two_means");
  set("label-input", job.label ?? "concept");
  set("seeds-f", ((job.seeds_f as string[]) ?? []).join(", "));
  set("seeds-m", ((job.seeds_m as string[]) ?? []).join(", "));
  set("seed-pairs", ((job.seed_pairs as string[][]) ?? []).map((p) => p.join(":")).join(", "));
  set("equalize", ((job.equalize as string[][]) ?? []).map((p) => p.join(":")).join(", "));
  set("second-seeds", ((job.second_seeds as string[]) ?? []).join(", "));
  set("evaluation", ((job.evaluation as string[]) ?? []).join(", "));
  ($("with-metrics") as HTMLInputElement).checked = Boolean(job.metrics);
}

async function exportEmbedding(): Promise<void> {
  const sessionId = ui.sessionId;
  if (!sessionId) return;
  clearError();
  try {
    const format = ($("export-format") as HTMLSelectElement).value;
    const text = await api.exportText(sessionId, format);
    const blob = new Blob([text], { type: "text/plain;charset=utf-8" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = format === "word2vec_text" ? "embedding.w2v.txt" : "embedding.glove.txt";
    a.click();
    URL.revokeObjectURL(a.href);
  } catch (err) {
    showError(err);
  }
}

async function resetSession(): Promise<void> {
  const sessionId = ui.sessionId;
  if (!sessionId) return;
  clearError();
  try {
    await api.reset(sessionId);
    ui = { ...ui, trace: null, frameIndex: 0 };
    transform = null;
    renderCurrent();
    renderMetrics();
  } catch (err) {
    showError(err);
  }
}

async function boot(): Promise<void> {
  try {
    const [names, presetList] = await Promise.all([api.embeddings(), api.presets()]);
    const select = $("embedding-select") as HTMLSelectElement;
    for (const name of names.embeddings) {
      const opt = document.createElement("option");
      opt.value = opt.textContent = name;
      select.appendChild(opt);
    }
    presets = presetList.presets;
    const presetSelect = $("preset-select") as HTMLSelectElement;
    for (const p of presets) {
      const opt = document.createElement("option");
      opt.value = opt.textContent = p.name;
      presetSelect.appendChild(opt);
    }
    presetSelect.addEventListener("change", () => applyPreset(presetSelect.value));
    await newSession();
  } catch (err) {
    showError(err);
  }

  $("new-session").addEventListener("click", () => void newSession());
  $("run-job").addEventListener("click", () => void runJob());
  $("step-next").addEventListener("click", () => animateTo(ui.frameIndex + 1));
  $("step-prev").addEventListener("click", () => animateTo(ui.frameIndex - 1));
  $("step-first").addEventListener("click", () => {
    ui = state.firstFrame(ui);
    renderCurrent();
  });
  $("step-play").addEventListener("click", () => void playAll());
  $("export-button").addEventListener("click", () => void exportEmbedding());
  $("reset-session").addEventListener("click", () => void resetSession());
  for (const id of ["toggle-labels", "toggle-direction", "toggle-evaluation"]) {
    $(id).addEventListener("change", renderCurrent);
  }
}

void boot();
