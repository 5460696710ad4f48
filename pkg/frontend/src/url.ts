// View state <-> URL hash. The whole view must be shareable: pasting the
// URL elsewhere restores the exact same recording, filters, zoom and
// selection. Encoding is plain query syntax inside the hash so links stay
// readable and diffable.

import { CATEGORIES, Category, ViewState, defaultState } from './state.js';

const isCategory = (name: string): name is Category =>
  (CATEGORIES as readonly string[]).includes(name);

export function encodeState(state: ViewState): string {
  const params = new URLSearchParams();
  if (state.recording) params.set('r', state.recording);
  if (state.compareWith) params.set('vs', state.compareWith);
  if (state.categories.length !== CATEGORIES.length) {
    params.set('cat', state.categories.join('.'));
  }
  if (state.lod !== 0) params.set('lod', String(state.lod));
  if (state.viewport) {
    const { t0, t1, line0, line1 } = state.viewport;
    params.set('win', `${t0}-${t1}-${line0}-${line1}`);
  }
  if (state.selected !== null) params.set('sel', String(state.selected));
  const encoded = params.toString();
  return encoded ? `#${encoded}` : '';
}

export function decodeState(hash: string): ViewState {
  const state = defaultState();
  const raw = hash.startsWith('#') ? hash.slice(1) : hash;
  if (!raw) return state;
  let params: URLSearchParams;
  try {
    params = new URLSearchParams(raw);
  } catch {
    return state;
  }
  const r = params.get('r');
  if (r) state.recording = r;
  const vs = params.get('vs');
  if (vs) state.compareWith = vs;
  const cat = params.get('cat');
  if (cat !== null) {
    const names = cat === '' ? [] : cat.split('.');
    if (names.every(isCategory)) {
      // keep canonical order regardless of what the link says
      const active = new Set(names);
      state.categories = CATEGORIES.filter((c) => active.has(c));
    }
  }
  const lod = parseIntStrict(params.get('lod'));
  if (lod !== null && lod >= 0) state.lod = lod;
  const win = params.get('win');
  if (win) {
    const parts = win.split('-').map(parseIntStrict);
    if (parts.length === 4 && parts.every((p) => p !== null)) {
      const [t0, t1, line0, line1] = parts as [number, number, number, number];
      if (t0 <= t1 && line0 <= line1) state.viewport = { t0, t1, line0, line1 };
    }
  }
  const sel = parseIntStrict(params.get('sel'));
  if (sel !== null) state.selected = sel;
  return state;
}

function parseIntStrict(text: string | null): number | null {
  if (text === null || !/^-?\d+$/.test(text)) return null;
  const value = Number(text);
  return Number.isSafeInteger(value) ? value : null;
}

/** Push the state into the address bar without adding history entries. */
export function syncUrl(state: ViewState, win: Pick<Window, 'history' | 'location'>): void {
  const hash = encodeState(state);
  const url = win.location.pathname + win.location.search + hash;
  win.history.replaceState(null, '', url);
}
