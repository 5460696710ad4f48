// Virtualized event list. Only the rows inside the scroll window (plus a
// small overscan) exist in the DOM, so a 100k-event recording costs the
// same as a dozen. Rows link back to the track through onSelect.

import { StreamEvent } from './api.js';
import { CATEGORIES, CATEGORY_OF, Category } from './state.js';

const OVERSCAN = 6;

export interface EventListOptions {
  rowHeight?: number;
  height?: number;
}

export class EventList {
  readonly root: HTMLElement;
  private readonly viewportEl: HTMLElement;
  private readonly spacer: HTMLElement;
  private readonly rowHeight: number;
  private readonly height: number;
  private events: StreamEvent[] = [];
  private visible: StreamEvent[] = [];
  private categories = new Set<Category>(CATEGORIES);
  private selected: number | null = null;
  private selectHandler: ((eventId: number) => void) | null = null;

  constructor(container: Element, options: EventListOptions = {}) {
    this.rowHeight = options.rowHeight ?? 24;
    this.height = options.height ?? 480;
    this.root = document.createElement('div');
    this.root.className = 'event-list';
    this.viewportEl = document.createElement('div');
    this.viewportEl.className = 'event-list-viewport';
    this.viewportEl.style.height = `${this.height}px`;
    this.viewportEl.style.overflowY = 'auto';
    this.viewportEl.style.position = 'relative';
    this.spacer = document.createElement('div');
    this.spacer.style.position = 'relative';
    this.viewportEl.appendChild(this.spacer);
    this.root.appendChild(this.viewportEl);
    container.appendChild(this.root);

    this.viewportEl.addEventListener('scroll', () => this.render());
    this.viewportEl.addEventListener('click', (e) => {
      const row = (e.target as Element | null)?.closest?.('[data-event-id]');
      if (row && this.selectHandler) {
        this.selectHandler(Number(row.getAttribute('data-event-id')));
      }
    });
  }

  onSelect(handler: (eventId: number) => void): void {
    this.selectHandler = handler;
  }

  setEvents(events: StreamEvent[]): void {
    this.events = events;
    this.refilter();
  }

  setCategories(categories: Iterable<Category>): void {
    this.categories = new Set(categories);
    this.refilter();
  }

  /** Highlight an event's row and scroll it into the window. */
  select(eventId: number | null): void {
    this.selected = eventId;
    if (eventId !== null) {
      const index = this.visible.findIndex((e) => e.id === eventId);
      if (index >= 0) {
        const top = index * this.rowHeight;
        const scroll = this.viewportEl.scrollTop;
        if (top < scroll || top + this.rowHeight > scroll + this.height) {
          this.viewportEl.scrollTop = Math.max(top - this.height / 2, 0);
        }
      }
    }
    this.render();
  }

  /** Number of row elements currently materialized (test hook). */
  rowCount(): number {
    return this.spacer.children.length;
  }

  private refilter(): void {
    this.visible = this.events.filter((e) =>
      this.categories.has(CATEGORY_OF[e.type] ?? 'Activity'),
    );
    this.spacer.style.height = `${this.visible.length * this.rowHeight}px`;
    this.render();
  }

  private render(): void {
    const scroll = this.viewportEl.scrollTop;
    const first = Math.max(Math.floor(scroll / this.rowHeight) - OVERSCAN, 0);
    const last = Math.min(
      Math.ceil((scroll + this.height) / this.rowHeight) + OVERSCAN,
      this.visible.length,
    );
    const rows: string[] = [];
    for (let i = first; i < last; i++) {
      const event = this.visible[i];
      const category = CATEGORY_OF[event.type] ?? 'Activity';
      const classes = ['event-row', `cat-${category.toLowerCase()}`];
      if (event.id === this.selected) classes.push('selected');
      rows.push(
        `<div class="${classes.join(' ')}" data-event-id="${event.id}"` +
          ` data-category="${category}"` +
          ` style="position:absolute;top:${i * this.rowHeight}px;height:${this.rowHeight}px">` +
          `<span class="event-id">#${event.id}</span>` +
          `<span class="event-type">${event.type}</span>` +
          `<span class="event-time">${formatMs(event.timestamp_ms)}</span>` +
          `<span class="event-detail">${escapeHtml(detailOf(event))}</span>` +
          '</div>',
      );
    }
    this.spacer.innerHTML = rows.join('');
  }
}

function detailOf(event: StreamEvent): string {
  const p = event.payload;
  const path = p['file'] ?? p['path'];
  if (typeof path === 'string') {
    const line = p['line'] ?? p['from_first'] ?? p['start_line'];
    return typeof line === 'number' ? `${path}:${line}` : path;
  }
  if (typeof p['target'] === 'string') return String(p['target']);
  if (typeof p['query'] === 'string') return String(p['query']);
  return '';
}

function formatMs(ms: number): string {
  const s = Math.floor(ms / 1000);
  const m = Math.floor(s / 60);
  return `${m}:${String(s % 60).padStart(2, '0')}.${String(ms % 1000).padStart(3, '0')}`;
}

const escapeHtml = (text: string): string =>
  text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');
