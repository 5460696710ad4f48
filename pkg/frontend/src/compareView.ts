// Side-by-side comparison. Two recordings over the same manifest share one
// global-line axis so positions line up; when manifests differ the server
// withholds the aligned export and the view says so instead of guessing.

import { Comparison, Phase, TrackPayload } from './api.js';
import { Category, Viewport } from './state.js';
import { TrackView } from './trackView.js';

export interface ComparePane {
  recordingId: string;
  view: TrackView;
}

export class CompareView {
  readonly root: HTMLElement;
  private panes: ComparePane[] = [];

  constructor(container: Element) {
    this.root = document.createElement('div');
    this.root.className = 'compare-view';
    container.appendChild(this.root);
  }

  /**
   * Returns the panes it created (empty when alignment is unavailable).
   * Rankings render either way; they compare scalars, not coordinates.
   */
  render(
    comparison: Comparison,
    tracks: Record<string, TrackPayload>,
    phases: Record<string, Phase[]> = {},
  ): ComparePane[] {
    this.root.innerHTML = '';
    this.panes = [];

    if (!comparison.aligned || !comparison.aligned.shared_manifest) {
      const warning = document.createElement('div');
      warning.className = 'compare-warning';
      warning.textContent =
        comparison.warnings.join('; ') || 'recordings do not share a manifest';
      this.root.appendChild(warning);
    } else {
      // one shared time scale: the slower recording sets the depth
      const shared = sharedBounds(comparison.recordings.map((id) => tracks[id]));
      const row = document.createElement('div');
      row.className = 'compare-row';
      this.root.appendChild(row);
      for (const recordingId of comparison.recordings) {
        const pane = document.createElement('div');
        pane.className = 'compare-pane';
        const caption = document.createElement('div');
        caption.className = 'compare-caption';
        caption.textContent = recordingId;
        pane.appendChild(caption);
        row.appendChild(pane);
        const view = new TrackView(pane, { width: 470, height: 420 });
        view.setData(tracks[recordingId], phases[recordingId] ?? []);
        view.setViewport(shared);
        this.panes.push({ recordingId, view });
      }
    }

    this.root.appendChild(renderRankings(comparison));
    return this.panes;
  }

  setCategories(categories: Iterable<Category>): void {
    const cats = [...categories];
    for (const pane of this.panes) pane.view.setCategories(cats);
  }
}

function sharedBounds(tracks: TrackPayload[]): Viewport {
  let t1 = 1;
  let lines = 2;
  for (const track of tracks) {
    const last = track.points[track.points.length - 1];
    if (last) t1 = Math.max(t1, last.timestamp_ms);
    lines = Math.max(lines, track.files.reduce((n, f) => n + f.line_count, 0));
  }
  return { t0: 0, t1, line0: 1, line1: lines };
}

function renderRankings(comparison: Comparison): HTMLElement {
  const table = document.createElement('table');
  table.className = 'rankings';
  const header = document.createElement('tr');
  header.innerHTML =
    '<th>metric</th>' +
    comparison.recordings.map((id) => `<th>${id}</th>`).join('');
  table.appendChild(header);
  for (const [metric, entries] of Object.entries(comparison.rankings)) {
    const byId = new Map(entries.map((e) => [e.recording_id, e]));
    const tr = document.createElement('tr');
    tr.innerHTML =
      `<td>${metric}</td>` +
      comparison.recordings
        .map((id) => {
          const entry = byId.get(id);
          return entry
            ? `<td class="rank-${entry.rank}">${entry.value}</td>`
            : '<td></td>';
        })
        .join('');
    table.appendChild(tr);
  }
  return table;
}
