import { beforeEach, describe, expect, it } from 'vitest';

import { Comparison, TrackPayload } from '../src/api.js';
import { CompareView } from '../src/compareView.js';
import compareMismatch from './fixtures/compare.mismatch.json';
import compareShared from './fixtures/compare.shared.json';
import trackFixture from './fixtures/iev5.track.lod1.json';

const shared = compareShared as unknown as Comparison;
const mismatch = compareMismatch as unknown as Comparison;
const track = trackFixture as unknown as TrackPayload;

let container: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = '';
  container = document.createElement('div');
  document.body.appendChild(container);
});

describe('CompareView', () => {
  it('renders two panes on a shared axis when manifests match', () => {
    const view = new CompareView(container);
    const tracks: Record<string, TrackPayload> = {};
    for (const id of shared.recordings) tracks[id] = track;
    const panes = view.render(shared, tracks);
    expect(panes.length).toBe(2);
    expect(container.querySelectorAll('.compare-pane svg').length).toBe(2);
    expect(container.querySelector('.compare-warning')).toBeNull();
    // both panes plot every point of the payload they were given
    for (const pane of panes) {
      expect(pane.view.svg.querySelectorAll('use.glyph').length).toBe(track.point_count);
    }
  });

  it('warns instead of guessing when manifests differ', () => {
    const view = new CompareView(container);
    const panes = view.render(mismatch, {});
    expect(panes.length).toBe(0);
    const warning = container.querySelector('.compare-warning');
    expect(warning).not.toBeNull();
    expect(warning!.textContent).toContain('manifests differ');
    expect(container.querySelectorAll('.compare-pane').length).toBe(0);
  });

  it('renders the ranking table either way', () => {
    const view = new CompareView(container);
    view.render(mismatch, {});
    const table = container.querySelector('table.rankings')!;
    expect(table).not.toBeNull();
    const metrics = [...table.querySelectorAll('td:first-child')].map((td) => td.textContent);
    expect(metrics).toContain('final_score');
    expect(table.querySelectorAll('td.rank-1').length).toBeGreaterThan(0);
  });

  it('category filtering reaches every pane', () => {
    const view = new CompareView(container);
    const tracks: Record<string, TrackPayload> = {};
    for (const id of shared.recordings) tracks[id] = track;
    view.render(shared, tracks);
    view.setCategories(['Edit']);
    for (const svg of container.querySelectorAll('.compare-pane svg')) {
      const cats = new Set(
        [...svg.querySelectorAll('use.glyph')].map((g) => g.getAttribute('data-category')),
      );
      expect([...cats]).toEqual(['Edit']);
    }
  });
});
