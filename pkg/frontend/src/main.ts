// Application wiring: URL -> state -> fetches -> views, and interaction
// back into state. Everything below is glue; behaviour lives in the
// modules it composes.

import { ApiClient, Phase, Report, StreamEvent, TrackPayload } from './api.js';
import { CompareView } from './compareView.js';
import { EventList } from './eventList.js';
import { DEFAULT_GLYPH_BUDGET, chooseLod, overBudget } from './lod.js';
import {
  CATEGORIES,
  Category,
  RecordingBounds,
  ViewState,
  forRecording,
  fullViewport,
  panToContain,
  selectEvent,
  timeFraction,
  toggleCategory,
  viewportContains,
  zoomViewport,
} from './state.js';
import { TrackView } from './trackView.js';
import { decodeState, syncUrl } from './url.js';

interface Loaded {
  report: Report;
  track: TrackPayload;
  phases: Phase[];
  events: StreamEvent[];
  bounds: RecordingBounds;
}

class App {
  private state: ViewState;
  private loaded: Loaded | null = null;
  private readonly api: ApiClient;
  private readonly trackView: TrackView;
  private readonly eventList: EventList;
  private readonly compareView: CompareView;
  private readonly recordingSelect: HTMLSelectElement;
  private readonly compareSelect: HTMLSelectElement;
  private readonly lodLabel: HTMLElement;
  private readonly statusLabel: HTMLElement;

  constructor(private readonly rootEl: Element) {
    const params = new URLSearchParams(window.location.search);
    this.api = new ApiClient(params.get('api') ?? '');
    this.state = decodeState(window.location.hash);

    this.recordingSelect = this.rootEl.querySelector('#recording')!;
    this.compareSelect = this.rootEl.querySelector('#compare-with')!;
    this.lodLabel = this.rootEl.querySelector('#lod-label')!;
    this.statusLabel = this.rootEl.querySelector('#status')!;
    this.trackView = new TrackView(this.rootEl.querySelector('#track')!);
    this.eventList = new EventList(this.rootEl.querySelector('#events')!);
    this.compareView = new CompareView(this.rootEl.querySelector('#comparison')!);

    this.trackView.onSelect((id) => this.onGlyphClick(id));
    this.eventList.onSelect((id) => this.onRowClick(id));
    this.wireControls();
    window.addEventListener('hashchange', () => {
      this.state = decodeState(window.location.hash);
      void this.refresh(true);
    });
  }

  async start(): Promise<void> {
    const listing = await this.api.listRecordings();
    for (const select of [this.recordingSelect, this.compareSelect]) {
      for (const summary of listing) {
        const option = document.createElement('option');
        option.value = summary.recording_id;
        option.textContent = summary.recording_id;
        select.appendChild(option);
      }
    }
    if (!this.state.recording && listing.length) {
      this.state = forRecording(this.state, listing[0].recording_id);
    }
    await this.refresh(true);
  }

  private wireControls(): void {
    const filters = this.rootEl.querySelector('#filters')!;
    for (const category of CATEGORIES) {
      const label = document.createElement('label');
      const box = document.createElement('input');
      box.type = 'checkbox';
      box.checked = this.state.categories.includes(category);
      box.dataset.category = category;
      box.addEventListener('change', () => {
        this.state = toggleCategory(this.state, category);
        this.applyFilters();
      });
      label.appendChild(box);
      label.appendChild(document.createTextNode(category));
      filters.appendChild(label);
    }

    this.recordingSelect.addEventListener('change', () => {
      this.state = forRecording(this.state, this.recordingSelect.value || null);
      void this.refresh(true);
    });
    this.compareSelect.addEventListener('change', () => {
      this.state = { ...this.state, compareWith: this.compareSelect.value || null };
      void this.refresh(false);
    });
    this.rootEl.querySelector('#zoom-in')!.addEventListener('click', () => this.zoom(0.5));
    this.rootEl.querySelector('#zoom-out')!.addEventListener('click', () => this.zoom(2));
    this.rootEl.querySelector('#edges')!.addEventListener('change', (e) => {
      this.trackView.setEdges((e.target as HTMLInputElement).checked);
    });
  }

  private async refresh(reloadRecording: boolean): Promise<void> {
    if (!this.state.recording) return;
    try {
      if (reloadRecording || !this.loaded) {
        const id = this.state.recording;
        const report = await this.api.report(id);
        const bounds: RecordingBounds = {
          duration_ms: report.summary.duration_ms,
          total_lines: 0, // filled from the track below
        };
        const lod = this.pickLod(report, bounds);
        const [track, phases, events] = await Promise.all([
          this.api.track(id, lod),
          this.api.phases(id),
          this.api.events(id, 0, report.summary.event_count),
        ]);
        bounds.total_lines = track.files.reduce((n, f) => n + f.line_count, 0);
        this.loaded = { report, track, phases, events, bounds };
        this.state = { ...this.state, lod };
        this.trackView.setData(track, phases);
        this.eventList.setEvents(events);
      }
      this.trackView.setViewport(this.state.viewport);
      this.applyFilters();
      this.applySelection();
      await this.refreshComparison();
      this.lodLabel.textContent = `LOD ${this.state.lod}`;
      this.statusLabel.textContent = '';
    } catch (err) {
      // keep the previous view; a failed fetch must not blank the screen
      this.statusLabel.textContent = err instanceof Error ? err.message : String(err);
    }
    syncUrl(this.state, window);
  }

  private pickLod(report: Report, bounds: RecordingBounds): number {
    const fraction = timeFraction(this.state.viewport, bounds);
    return chooseLod(report.lod_point_counts, DEFAULT_GLYPH_BUDGET, fraction);
  }

  private async refreshComparison(): Promise<void> {
    const container = this.rootEl.querySelector('#comparison')!;
    if (!this.state.compareWith || !this.state.recording) {
      container.classList.add('hidden');
      return;
    }
    container.classList.remove('hidden');
    const ids = [this.state.recording, this.state.compareWith];
    const comparison = await this.api.compare(ids);
    const tracks: Record<string, TrackPayload> = {};
    const phases: Record<string, Phase[]> = {};
    if (comparison.aligned?.shared_manifest) {
      for (const id of ids) {
        const report = await this.api.report(id);
        const lod = chooseLod(report.lod_point_counts, DEFAULT_GLYPH_BUDGET);
        tracks[id] = await this.api.track(id, lod);
        phases[id] = await this.api.phases(id);
      }
    }
    this.compareView.render(comparison, tracks, phases);
    this.compareView.setCategories(this.state.categories);
  }

  private applyFilters(): void {
    this.trackView.setCategories(this.state.categories);
    this.eventList.setCategories(this.state.categories);
    this.compareView.setCategories(this.state.categories);
    syncUrl(this.state, window);
  }

  private applySelection(): void {
    this.trackView.setSelected(this.state.selected);
    this.eventList.select(this.state.selected);
  }

  private onGlyphClick(eventId: number): void {
    this.state = selectEvent(this.state, eventId);
    this.applySelection();
    syncUrl(this.state, window);
  }

  private onRowClick(eventId: number): void {
    this.state = selectEvent(this.state, eventId);
    if (this.loaded) {
      const point = this.loaded.track.points.find((p) => p.event_id === eventId);
      const event = this.loaded.events.find((e) => e.id === eventId);
      const t = point?.timestamp_ms ?? event?.timestamp_ms;
      const viewport = this.state.viewport;
      if (viewport && t !== undefined && !viewportContains(viewport, t, null)) {
        this.state = {
          ...this.state,
          viewport: panToContain(viewport, this.loaded.bounds, t, point?.global_pos ?? null),
        };
        void this.refetchTrackWindow();
      }
    }
    this.applySelection();
    this.trackView.setViewport(this.state.viewport);
    syncUrl(this.state, window);
  }

  private zoom(factor: number): void {
    if (!this.loaded) return;
    const bounds = this.loaded.bounds;
    const viewport = this.state.viewport ?? fullViewport(bounds);
    const zoomed = zoomViewport(viewport, bounds, factor);
    const whole = zoomed.t0 <= 0 && zoomed.t1 >= bounds.duration_ms;
    this.state = { ...this.state, viewport: whole ? null : zoomed };
    void this.refetchTrackWindow();
  }

  /** Zoom changed the visible fraction: re-pick the level and refetch. */
  private async refetchTrackWindow(): Promise<void> {
    if (!this.loaded || !this.state.recording) return;
    let lod = this.pickLod(this.loaded.report, this.loaded.bounds);
    let track = await this.api.track(this.state.recording, lod);
    const visible = this.state.viewport
      ? track.points.filter((p) =>
          viewportContains(this.state.viewport!, p.timestamp_ms, p.global_pos),
        ).length
      : track.point_count;
    if (overBudget(visible) && lod + 1 < this.loaded.report.lod_point_counts.length) {
      lod += 1;
      track = await this.api.track(this.state.recording, lod);
    }
    this.state = { ...this.state, lod };
    this.loaded = { ...this.loaded, track };
    this.trackView.setData(track, this.loaded.phases);
    this.trackView.setViewport(this.state.viewport);
    this.applyFilters();
    this.applySelection();
    this.lodLabel.textContent = `LOD ${this.state.lod}`;
    syncUrl(this.state, window);
  }
}

export function boot(root: Element): App {
  const app = new App(root);
  void app.start();
  return app;
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  boot(document.getElementById('app')!);
}
