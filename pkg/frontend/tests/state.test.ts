import { describe, expect, it } from 'vitest';

import {
  CATEGORIES,
  RecordingBounds,
  clampViewport,
  defaultState,
  forRecording,
  fullViewport,
  panToContain,
  selectEvent,
  timeFraction,
  toggleCategory,
  viewportContains,
  zoomViewport,
} from '../src/state.js';

const bounds: RecordingBounds = { duration_ms: 600_000, total_lines: 440 };

describe('category toggling', () => {
  it('removes and restores a category', () => {
    const off = toggleCategory(defaultState(), 'Navigation');
    expect(off.categories).not.toContain('Navigation');
    expect(off.categories).toHaveLength(CATEGORIES.length - 1);
    const on = toggleCategory(off, 'Navigation');
    expect(on.categories).toEqual([...CATEGORIES]);
  });

  it('keeps canonical order when re-enabling', () => {
    let state = defaultState();
    for (const category of ['Activity', 'Solution', 'Activity'] as const) {
      state = toggleCategory(state, category);
    }
    // Activity went off, Solution went off, Activity came back
    expect(state.categories).toEqual(['Activity', 'Execution', 'Edit', 'Environment', 'Navigation']);
  });

  it('never mutates the input state', () => {
    const state = defaultState();
    toggleCategory(state, 'Edit');
    expect(state.categories).toEqual([...CATEGORIES]);
  });
});

describe('viewport clamping', () => {
  it('stays inside the recording', () => {
    const clamped = clampViewport({ t0: -50, t1: 900_000, line0: -3, line1: 9999 }, bounds);
    expect(clamped).toEqual({ t0: 0, t1: 600_000, line0: 1, line1: 440 });
  });

  it('repairs inverted windows', () => {
    const clamped = clampViewport({ t0: 5000, t1: 100, line0: 30, line1: 4 }, bounds);
    expect(clamped.t0).toBeLessThan(clamped.t1);
    expect(clamped.line0).toBeLessThan(clamped.line1);
  });

  it('widens degenerate windows', () => {
    const clamped = clampViewport({ t0: 100, t1: 100, line0: 440, line1: 440 }, bounds);
    expect(clamped.t1).toBeGreaterThan(clamped.t0);
    expect(clamped.line1).toBeGreaterThan(clamped.line0);
    expect(clamped.line1).toBeLessThanOrEqual(bounds.total_lines);
  });
});

describe('zooming', () => {
  it('halving then doubling returns the same window', () => {
    const start = { t0: 100_000, t1: 300_000, line0: 1, line1: 440 };
    const zoomed = zoomViewport(start, bounds, 0.5);
    expect(zoomed.t1 - zoomed.t0).toBe(100_000);
    expect(zoomViewport(zoomed, bounds, 2)).toEqual(start);
  });

  it('zooming out clamps at the recording bounds', () => {
    const wide = zoomViewport({ t0: 0, t1: 500_000, line0: 1, line1: 440 }, bounds, 4);
    expect(wide.t0).toBe(0);
    expect(wide.t1).toBe(600_000);
  });
});

describe('pan to contain', () => {
  const vp = { t0: 100_000, t1: 200_000, line0: 100, line1: 200 };

  it('is a no-op when the target is already visible', () => {
    expect(panToContain(vp, bounds, 150_000, 150)).toEqual(vp);
  });

  it('pans forward without rescaling', () => {
    const panned = panToContain(vp, bounds, 350_000, null);
    expect(panned.t1).toBe(350_000);
    expect(panned.t1 - panned.t0).toBe(100_000);
    expect(viewportContains(panned, 350_000, null)).toBe(true);
  });

  it('pans lines as well as time', () => {
    const panned = panToContain(vp, bounds, 150_000, 320);
    expect(panned.line1).toBe(320);
    expect(panned.line1 - panned.line0).toBe(100);
  });
});

describe('recording switches', () => {
  it('drops state owned by the previous recording', () => {
    let state = { ...defaultState(), recording: 'a', lod: 4, selected: 17 };
    state = { ...state, viewport: { t0: 0, t1: 10, line0: 1, line1: 5 } };
    const next = forRecording(state, 'b');
    expect(next.selected).toBeNull();
    expect(next.viewport).toBeNull();
    expect(next.lod).toBe(0);
  });

  it('keeps everything when the recording is unchanged', () => {
    const state = { ...defaultState(), recording: 'a', selected: 3 };
    expect(forRecording(state, 'a')).toBe(state);
  });
});

describe('helpers', () => {
  it('selectEvent only touches the selection', () => {
    const state = selectEvent(defaultState(), 42);
    expect(state.selected).toBe(42);
    expect(state.categories).toEqual([...CATEGORIES]);
  });

  it('timeFraction reports the visible share of the recording', () => {
    expect(timeFraction(null, bounds)).toBe(1);
    expect(timeFraction({ t0: 0, t1: 150_000, line0: 1, line1: 440 }, bounds)).toBe(0.25);
    expect(timeFraction(fullViewport(bounds), bounds)).toBe(1);
  });
});
