/**
 * SVG scatter plot for keyword projections. Points arrive from the API
 * already reduced to two dimensions; this module only scales and paints
 * them. Colors key off the solution source tag so ground truth and the
 * two model outputs stay visually separate.
 */

import { ScatterPoint } from './api.js';
import { svgEl } from './dom.js';

export const SOURCE_COLORS: Readonly<Record<string, string>> = {
  'ground-truth': '#d62728',
  'gpt-4': '#2ca02c',
  'gpt-3.5': '#1f77b4',
};

// cycled for tags outside the three expected sources
const FALLBACK_COLORS = ['#9467bd', '#8c564b', '#e377c2', '#7f7f7f', '#bcbd22', '#17becf'];

export function colorFor(source: string, seenUnknown: string[]): string {
  const fixed = SOURCE_COLORS[source];
  if (fixed !== undefined) return fixed;
  let at = seenUnknown.indexOf(source);
  if (at === -1) {
    at = seenUnknown.length;
    seenUnknown.push(source);
  }
  return FALLBACK_COLORS[at % FALLBACK_COLORS.length] ?? '#7f7f7f';
}

interface ScatterOptions {
  width?: number;
  height?: number;
}

export function renderScatter(points: ScatterPoint[], options: ScatterOptions = {}): SVGSVGElement {
  const width = options.width ?? 560;
  const height = options.height ?? 380;
  const margin = 36;

  const svg = svgEl('svg', {
    class: 'keyword-scatter',
    viewBox: `0 0 ${width} ${height}`,
    width: String(width),
    height: String(height),
    role: 'img',
  }) as SVGSVGElement;

  const xs = points.map((p) => p.x);
  const ys = points.map((p) => p.y);
  const span = (values: number[]): [number, number] => {
    const lo = Math.min(...values);
    const hi = Math.max(...values);
    // degenerate axis (all points equal): pad so scaling stays finite
    return lo === hi ? [lo - 1, hi + 1] : [lo, hi];
  };
  const [xLo, xHi] = points.length > 0 ? span(xs) : [0, 1];
  const [yLo, yHi] = points.length > 0 ? span(ys) : [0, 1];
  const sx = (x: number): number => margin + ((x - xLo) / (xHi - xLo)) * (width - 2 * margin);
  // SVG y grows downward; flip so larger y plots higher
  const sy = (y: number): number => height - margin - ((y - yLo) / (yHi - yLo)) * (height - 2 * margin);

  svg.appendChild(
    svgEl('rect', {
      x: String(margin),
      y: String(margin),
      width: String(width - 2 * margin),
      height: String(height - 2 * margin),
      class: 'scatter-frame',
      fill: 'none',
      stroke: 'currentColor',
      'stroke-opacity': '0.25',
    }),
  );

  const seenUnknown: string[] = [];
  const legendOrder: string[] = [];
  for (const point of points) {
    const color = colorFor(point.source, seenUnknown);
    if (!legendOrder.includes(point.source)) legendOrder.push(point.source);
    const dot = svgEl('circle', {
      cx: sx(point.x).toFixed(2),
      cy: sy(point.y).toFixed(2),
      r: '5',
      fill: color,
      'fill-opacity': '0.85',
      'data-source': point.source,
      'data-label': point.label,
    });
    const tip = svgEl('title', {});
    tip.textContent = `${point.label} (${point.source})`;
    dot.appendChild(tip);
    svg.appendChild(dot);
  }

  // legend: one swatch per source, in first-seen order
  legendOrder.forEach((source, row) => {
    const y = margin + 6 + row * 18;
    svg.appendChild(
      svgEl('circle', {
        cx: String(margin + 8),
        cy: String(y),
        r: '5',
        fill: colorFor(source, seenUnknown),
        class: 'legend-swatch',
        'data-source': source,
      }),
    );
    const label = svgEl('text', {
      x: String(margin + 18),
      y: String(y + 4),
      class: 'legend-label',
      'font-size': '12',
      fill: 'currentColor',
    });
    label.textContent = source;
    svg.appendChild(label);
  });

  return svg;
}
