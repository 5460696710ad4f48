// SVG track view. Global line runs left to right, time runs downward;
// every plotted point becomes one <use> glyph carrying its event id, so
// interaction is plain event delegation and tests can count what's visible.

import { Phase, TrackPayload, TrackPoint } from './api.js';
import { CATEGORIES, Category, Viewport, viewportContains } from './state.js';

const SVG_NS = 'http://www.w3.org/2000/svg';

const SYMBOLS: Record<Category, string> = {
  Activity: '<circle r="3.2"/>',
  Execution: '<path d="M 0 -3.6 L 3.4 2.6 L -3.4 2.6 Z"/>',
  Edit: '<rect x="-2.8" y="-2.8" width="5.6" height="5.6"/>',
  Environment: '<path d="M 0 -3.8 L 3.8 0 L 0 3.8 L -3.8 0 Z"/>',
  Navigation: '<path d="M -2.8 -2.8 L 2.8 2.8 M -2.8 2.8 L 2.8 -2.8" class="stroke"/>',
  Solution: '<path d="M 0 -3.4 L 0 3.4 M -3.4 0 L 3.4 0" class="stroke"/>',
};

export interface TrackViewOptions {
  width?: number;
  height?: number;
  showEdges?: boolean;
}

interface Placed {
  point: TrackPoint;
  x: number;
  y: number;
}

/**
 * Renders one recording's track into a container and keeps selection and
 * category filtering up to date. Data goes in via setData/setViewport;
 * clicks come back out through onSelect.
 */
export class TrackView {
  readonly svg: SVGSVGElement;
  private readonly width: number;
  private readonly height: number;
  private track: TrackPayload | null = null;
  private phases: Phase[] = [];
  private categories = new Set<Category>(CATEGORIES);
  private viewport: Viewport | null = null;
  private selected: number | null = null;
  private showEdges: boolean;
  private selectHandler: ((eventId: number) => void) | null = null;

  constructor(container: Element, options: TrackViewOptions = {}) {
    this.width = options.width ?? 960;
    this.height = options.height ?? 520;
    this.showEdges = options.showEdges ?? true;
    this.svg = document.createElementNS(SVG_NS, 'svg') as SVGSVGElement;
    this.svg.setAttribute('viewBox', `0 0 ${this.width} ${this.height}`);
    this.svg.setAttribute('class', 'track-view');
    this.svg.addEventListener('click', (e) => {
      const glyph = (e.target as Element | null)?.closest?.('[data-event-id]');
      if (glyph && this.selectHandler) {
        this.selectHandler(Number(glyph.getAttribute('data-event-id')));
      }
    });
    container.appendChild(this.svg);
  }

  onSelect(handler: (eventId: number) => void): void {
    this.selectHandler = handler;
  }

  setData(track: TrackPayload, phases: Phase[] = []): void {
    this.track = track;
    this.phases = phases;
    this.render();
  }

  setCategories(categories: Iterable<Category>): void {
    this.categories = new Set(categories);
    this.render();
  }

  setViewport(viewport: Viewport | null): void {
    this.viewport = viewport;
    this.render();
  }

  setEdges(show: boolean): void {
    this.showEdges = show;
    this.render();
  }

  setSelected(eventId: number | null): void {
    this.selected = eventId;
    this.render();
  }

  /** Points of the active categories inside the viewport, with pixel
   * coordinates. Marker points render but never join the edge line. */
  private placed(): Placed[] {
    if (!this.track) return [];
    const bounds = this.bounds();
    const out: Placed[] = [];
    for (const point of this.track.points) {
      if (!this.categories.has(point.category as Category)) continue;
      if (point.global_pos === null) continue;
      if (
        this.viewport &&
        !viewportContains(this.viewport, point.timestamp_ms, point.global_pos)
      ) {
        continue;
      }
      out.push({
        point,
        x: this.x(point.global_pos, bounds),
        y: this.y(point.timestamp_ms, bounds),
      });
    }
    return out;
  }

  private bounds(): Viewport {
    if (this.viewport) return this.viewport;
    const track = this.track!;
    const totalLines = track.files.reduce((n, f) => n + f.line_count, 0);
    const last = track.points[track.points.length - 1];
    return {
      t0: 0,
      t1: Math.max(last ? last.timestamp_ms : 1, 1),
      line0: 1,
      line1: Math.max(totalLines, 2),
    };
  }

  private x(line: number, b: Viewport): number {
    return ((line - b.line0) / Math.max(b.line1 - b.line0, 1)) * this.width;
  }

  private y(t: number, b: Viewport): number {
    return ((t - b.t0) / Math.max(b.t1 - b.t0, 1)) * this.height;
  }

  private render(): void {
    if (!this.track) return;
    const bounds = this.bounds();
    const placed = this.placed();
    const parts: string[] = [];

    parts.push('<defs>');
    for (const category of Object.keys(SYMBOLS) as Category[]) {
      parts.push(`<g id="sym-${category.toLowerCase()}">${SYMBOLS[category]}</g>`);
    }
    parts.push('</defs>');

    for (const phase of this.phases) {
      const y0 = this.y(Math.max(phase.start_ms, bounds.t0), bounds);
      const y1 = this.y(Math.min(phase.end_ms, bounds.t1), bounds);
      if (y1 <= 0 || y0 >= this.height) continue;
      parts.push(
        `<rect class="phase phase-${phase.label.toLowerCase()}" x="0" y="${fmt(y0)}"` +
          ` width="${this.width}" height="${fmt(Math.max(y1 - y0, 0))}"/>`,
      );
    }

    if (this.showEdges) {
      const line = placed.filter((p) => !p.point.marker);
      if (line.length > 1) {
        const coords = line.map((p) => `${fmt(p.x)},${fmt(p.y)}`).join(' ');
        parts.push(`<polyline class="edges" fill="none" points="${coords}"/>`);
      }
    }

    for (const { point, x, y } of placed) {
      const classes = ['glyph'];
      if (point.marker) classes.push('marker');
      if (point.event_id === this.selected) classes.push('selected');
      const title =
        point.event_id === this.selected
          ? `<title>#${point.event_id} ${point.type} @ ${point.timestamp_ms}ms` +
            (point.file ? ` ${escapeText(point.file)}` : '') +
            '</title>'
          : '';
      parts.push(
        `<use href="#sym-${point.category.toLowerCase()}" x="${fmt(x)}" y="${fmt(y)}"` +
          ` class="${classes.join(' ')}" data-event-id="${point.event_id}"` +
          ` data-category="${point.category}">${title}</use>`,
      );
    }

    this.svg.innerHTML = parts.join('');
  }
}

const fmt = (v: number): string => (Math.round(v * 100) / 100).toString();

const escapeText = (text: string): string =>
  text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');
