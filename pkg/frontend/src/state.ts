/** UI state container: the current trace, frame cursor, and view toggles.
 * Frame navigation is pure over the trace; revisiting an index always yields
 * the same frame object. Network responses are guarded by a request sequence
 * number so a stale response can never clobber a newer one. */

import type { Toggles, TraceDto } from "./types.js";

export interface UiState {
  sessionId: string | null;
  trace: TraceDto | null;
  frameIndex: number;
  toggles: Toggles;
  selectedToken: string | null;
  requestSeq: number;
}

export function initialState(): UiState {
  return {
    sessionId: null,
    trace: null,
    frameIndex: 0,
    toggles: { labels: true, direction: true, evaluation: true },
    selectedToken: null,
    requestSeq: 0,
  };
}

export function frameCount(state: UiState): number {
  return state.trace ? state.trace.frames.length : 0;
}

export function clampIndex(state: UiState, index: number): number {
  const n = frameCount(state);
  if (n === 0) return 0;
  return Math.max(0, Math.min(n - 1, index));
}

export function withTrace(state: UiState, trace: TraceDto): UiState {
  return { ...state, trace, frameIndex: 0, selectedToken: null };
}

export function nextFrame(state: UiState): UiState {
  return { ...state, frameIndex: clampIndex(state, state.frameIndex + 1) };
}

export function prevFrame(state: UiState): UiState {
  return { ...state, frameIndex: clampIndex(state, state.frameIndex - 1) };
}

export function firstFrame(state: UiState): UiState {
  return { ...state, frameIndex: 0 };
}

export function setToggle(state: UiState, key: keyof Toggles, value: boolean): UiState {
  return { ...state, toggles: { ...state.toggles, [key]: value } };
}

export function currentFrame(state: UiState) {
  if (!state.trace) return null;
  return state.trace.frames[clampIndex(state, state.frameIndex)];
}

/** Sequence guard: beginRequest returns a ticket; a response is applied only
 * if its ticket is still the latest one issued. */
export function beginRequest(state: UiState): [UiState, number] {
  const seq = state.requestSeq + 1;
  return [{ ...state, requestSeq: seq }, seq];
}

export function isCurrentRequest(state: UiState, ticket: number): boolean {
  return state.requestSeq === ticket;
}
