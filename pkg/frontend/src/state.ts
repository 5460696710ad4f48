// View state and its transitions. Pure functions only; the DOM layer applies
// the results. State changes never mutate, so renders can diff by identity.

export const CATEGORIES = [
  'Activity',
  'Execution',
  'Edit',
  'Environment',
  'Navigation',
  'Solution',
] as const;

export type Category = (typeof CATEGORIES)[number];

// Mirror of the wire schema's event catalogue; the list view needs it to
// filter raw events, whose payloads carry only the type name.
export const CATEGORY_OF: Record<string, Category> = {
  RecordingEvent: 'Activity',
  ScrollEvent: 'Activity',
  TextSelectionEvent: 'Activity',
  DebugEvent: 'Execution',
  LaunchEvent: 'Execution',
  WebBrowserEvent: 'Execution',
  CodeChangeEvent: 'Edit',
  CodeCompletionEvent: 'Edit',
  TextCommentEvent: 'Edit',
  VoiceCommentEvent: 'Edit',
  EditorEvent: 'Environment',
  PerspectiveEvent: 'Environment',
  ViewEvent: 'Environment',
  WindowEvent: 'Environment',
  EditorMouseEvent: 'Navigation',
  EditorTextCursorEvent: 'Navigation',
  SearchEvent: 'Navigation',
  TreeSelectionEvent: 'Navigation',
  TreeViewerEvent: 'Navigation',
  FileEvent: 'Solution',
  ProjectEvent: 'Solution',
  ResourceEvent: 'Solution',
  SaveEvent: 'Solution',
};

/** Time window (ms) by global-line window; null means "fit the recording". */
export interface Viewport {
  t0: number;
  t1: number;
  line0: number;
  line1: number;
}

export interface RecordingBounds {
  duration_ms: number;
  total_lines: number;
}

export interface ViewState {
  recording: string | null;
  compareWith: string | null;
  categories: Category[];
  lod: number;
  viewport: Viewport | null;
  selected: number | null;
}

export const defaultState = (): ViewState => ({
  recording: null,
  compareWith: null,
  categories: [...CATEGORIES],
  lod: 0,
  viewport: null,
  selected: null,
});

const canonical = (cats: Iterable<Category>): Category[] =>
  CATEGORIES.filter((c) => new Set(cats).has(c));

export function toggleCategory(state: ViewState, category: Category): ViewState {
  const active = new Set(state.categories);
  if (active.has(category)) {
    active.delete(category);
  } else {
    active.add(category);
  }
  return { ...state, categories: canonical(active) };
}

/** Switching recordings drops everything tied to the old one. */
export function forRecording(state: ViewState, recording: string | null): ViewState {
  if (recording === state.recording) return state;
  return { ...state, recording, viewport: null, selected: null, lod: 0 };
}

export function selectEvent(state: ViewState, selected: number | null): ViewState {
  return { ...state, selected };
}

export function clampViewport(viewport: Viewport, bounds: RecordingBounds): Viewport {
  const clampT = (t: number) => Math.min(Math.max(t, 0), bounds.duration_ms);
  const clampLine = (l: number) => Math.min(Math.max(l, 1), bounds.total_lines);
  let t0 = clampT(Math.min(viewport.t0, viewport.t1));
  let t1 = clampT(Math.max(viewport.t0, viewport.t1));
  let line0 = clampLine(Math.min(viewport.line0, viewport.line1));
  let line1 = clampLine(Math.max(viewport.line0, viewport.line1));
  // degenerate windows render nothing useful; widen to the smallest sane span
  if (t1 <= t0) t1 = Math.min(t0 + 1, bounds.duration_ms) || 1;
  if (t1 <= t0) t0 = t1 - 1;
  if (line1 <= line0) {
    if (line1 < bounds.total_lines) line1 = line0 + 1;
    else line0 = line1 - 1;
  }
  return { t0, t1, line0, line1 };
}

export const fullViewport = (bounds: RecordingBounds): Viewport => ({
  t0: 0,
  t1: Math.max(bounds.duration_ms, 1),
  line0: 1,
  line1: Math.max(bounds.total_lines, 2),
});

/**
 * Scale the time window about its centre. factor < 1 zooms in, > 1 zooms
 * out; the result clamps to the recording.
 */
export function zoomViewport(
  viewport: Viewport,
  bounds: RecordingBounds,
  factor: number,
): Viewport {
  const mid = (viewport.t0 + viewport.t1) / 2;
  const half = ((viewport.t1 - viewport.t0) / 2) * factor;
  return clampViewport(
    { ...viewport, t0: Math.round(mid - half), t1: Math.round(mid + half) },
    bounds,
  );
}

/** Pan (never rescale) until the given moment and line are inside. */
export function panToContain(
  viewport: Viewport,
  bounds: RecordingBounds,
  t: number,
  line: number | null,
): Viewport {
  let { t0, t1, line0, line1 } = viewport;
  const tSpan = t1 - t0;
  if (t < t0) {
    t0 = t;
    t1 = t + tSpan;
  } else if (t > t1) {
    t1 = t;
    t0 = t - tSpan;
  }
  if (line !== null) {
    const lineSpan = line1 - line0;
    if (line < line0) {
      line0 = line;
      line1 = line + lineSpan;
    } else if (line > line1) {
      line1 = line;
      line0 = line - lineSpan;
    }
  }
  return clampViewport({ t0, t1, line0, line1 }, bounds);
}

export const viewportContains = (vp: Viewport, t: number, line: number | null): boolean =>
  t >= vp.t0 && t <= vp.t1 && (line === null || (line >= vp.line0 && line <= vp.line1));

/** Fraction of the recording's duration the viewport shows, in (0, 1]. */
export function timeFraction(viewport: Viewport | null, bounds: RecordingBounds): number {
  if (!viewport || bounds.duration_ms <= 0) return 1;
  return Math.min(1, Math.max((viewport.t1 - viewport.t0) / bounds.duration_ms, 0));
}
