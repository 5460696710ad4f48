// Viewport-driven level-of-detail selection. Levels stay discrete and come
// from the server; the client only picks which one to fetch so the rendered
// glyph count stays under budget.

export const DEFAULT_GLYPH_BUDGET = 5000;

/**
 * Pick the finest level whose expected on-screen point count fits the
 * budget.
 *
 * pointCounts[level] is the server-reported size of the whole track at that
 * level; levels nest, so counts never grow with the level. A viewport that
 * shows a fraction of the recording scales the expectation linearly, which
 * overshoots for bursty recordings but never the budget.
 */
export function chooseLod(
  pointCounts: readonly number[],
  budget: number = DEFAULT_GLYPH_BUDGET,
  viewportFraction = 1,
): number {
  if (pointCounts.length === 0) return 0;
  const fraction = Math.min(Math.max(viewportFraction, 0), 1);
  for (let level = 0; level < pointCounts.length; level++) {
    if (pointCounts[level] * fraction <= budget) return level;
  }
  return pointCounts.length - 1;
}

/** True when a freshly fetched payload still busts the budget and the view
 * should retry one level coarser (estimation is linear, reality is not). */
export function overBudget(visiblePoints: number, budget: number = DEFAULT_GLYPH_BUDGET): boolean {
  return visiblePoints > budget;
}
