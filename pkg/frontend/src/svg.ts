/** Deterministic SVG output for the two figure kinds.
 *
 * No drawing library: the figures are axes, markers and polylines, and
 * hand-written markup keeps rendering a pure function of the figure model
 * (identical input CSVs produce byte-identical SVG).
 */

import { RatioFigure, TraceFigure } from './figures.js';

const WIDTH = 760;
const HEIGHT = 520;
const MARGIN = { top: 46, right: 74, bottom: 58, left: 80 };
const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;

const SERIES_COLORS: Record<string, string> = {
  dca: '#d62728',
  bdca: '#1f77b4',
};
const FALLBACK_COLORS = ['#2ca02c', '#9467bd', '#8c564b', '#e377c2'];
const LAMBDA_COLOR = '#17becf';

export interface Labels {
  title?: string;
  xLabel?: string;
  yLabel?: string;
}

function fmt(v: number): string {
  if (v === 0) {
    return '0';
  }
  const abs = Math.abs(v);
  if (abs >= 1e4 || abs < 1e-3) {
    const exp = Math.floor(Math.log10(abs));
    const mant = v / Math.pow(10, exp);
    const m = Number(mant.toPrecision(3));
    return m === 1 ? `1e${exp}` : `${m}e${exp}`;
  }
  return String(Number(v.toPrecision(4)));
}

function px(v: number): string {
  return v.toFixed(2);
}

interface Scale {
  toPx(v: number): number;
  ticks: number[];
}

function linearScale(lo: number, hi: number, pxLo: number, pxHi: number,
                     tickCount = 6): Scale {
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  }
  const span = hi - lo;
  const rawStep = span / tickCount;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const norm = rawStep / mag;
  const step = (norm >= 5 ? 5 : norm >= 2 ? 2 : 1) * mag;
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step) {
    ticks.push(Math.abs(t) < step * 1e-9 ? 0 : t);
  }
  return {
    toPx: (v: number) => pxLo + ((v - lo) / span) * (pxHi - pxLo),
    ticks,
  };
}

function logScale(lo: number, hi: number, pxLo: number, pxHi: number): Scale {
  const eLo = Math.floor(Math.log10(lo));
  const eHi = Math.ceil(Math.log10(hi));
  const span = Math.max(eHi - eLo, 1);
  const stride = Math.max(1, Math.ceil(span / 9));
  const ticks: number[] = [];
  for (let e = eLo; e <= eHi; e += stride) {
    ticks.push(Math.pow(10, e));
  }
  return {
    toPx: (v: number) =>
      pxLo + ((Math.log10(v) - eLo) / span) * (pxHi - pxLo),
    ticks,
  };
}

function axisBottom(scale: Scale, label: string): string {
  const y = MARGIN.top + PLOT_H;
  const parts = [`<g class="axis axis-bottom" data-scale="linear">`];
  parts.push(`<line x1="${px(MARGIN.left)}" y1="${px(y)}" ` +
             `x2="${px(MARGIN.left + PLOT_W)}" y2="${px(y)}" stroke="black"/>`);
  for (const t of scale.ticks) {
    const x = scale.toPx(t);
    parts.push(`<line x1="${px(x)}" y1="${px(y)}" x2="${px(x)}" ` +
               `y2="${px(y + 5)}" stroke="black"/>`);
    parts.push(`<text x="${px(x)}" y="${px(y + 20)}" text-anchor="middle" ` +
               `font-size="11">${fmt(t)}</text>`);
  }
  parts.push(`<text x="${px(MARGIN.left + PLOT_W / 2)}" ` +
             `y="${px(y + 42)}" text-anchor="middle" font-size="13">` +
             `${label}</text>`);
  parts.push('</g>');
  return parts.join('\n');
}

function axisLeft(scale: Scale, label: string, logarithmic: boolean): string {
  const x = MARGIN.left;
  const parts = [`<g class="axis axis-left" data-scale="` +
                 `${logarithmic ? 'log' : 'linear'}">`];
  parts.push(`<line x1="${px(x)}" y1="${px(MARGIN.top)}" x2="${px(x)}" ` +
             `y2="${px(MARGIN.top + PLOT_H)}" stroke="black"/>`);
  for (const t of scale.ticks) {
    const y = scale.toPx(t);
    parts.push(`<line x1="${px(x - 5)}" y1="${px(y)}" x2="${px(x)}" ` +
               `y2="${px(y)}" stroke="black"/>`);
    parts.push(`<text x="${px(x - 8)}" y="${px(y + 4)}" text-anchor="end" ` +
               `font-size="11">${fmt(t)}</text>`);
  }
  parts.push(`<text transform="translate(${px(x - 58)},` +
             `${px(MARGIN.top + PLOT_H / 2)}) rotate(-90)" ` +
             `text-anchor="middle" font-size="13">${label}</text>`);
  parts.push('</g>');
  return parts.join('\n');
}

function axisRight(scale: Scale, label: string): string {
  const x = MARGIN.left + PLOT_W;
  const parts = [`<g class="axis axis-right" data-scale="linear">`];
  parts.push(`<line x1="${px(x)}" y1="${px(MARGIN.top)}" x2="${px(x)}" ` +
             `y2="${px(MARGIN.top + PLOT_H)}" stroke="black"/>`);
  for (const t of scale.ticks) {
    const y = scale.toPx(t);
    parts.push(`<line x1="${px(x)}" y1="${px(y)}" x2="${px(x + 5)}" ` +
               `y2="${px(y)}" stroke="black"/>`);
    parts.push(`<text x="${px(x + 8)}" y="${px(y + 4)}" ` +
               `text-anchor="start" font-size="11">${fmt(t)}</text>`);
  }
  parts.push(`<text transform="translate(${px(x + 56)},` +
             `${px(MARGIN.top + PLOT_H / 2)}) rotate(90)" ` +
             `text-anchor="middle" font-size="13">${label}</text>`);
  parts.push('</g>');
  return parts.join('\n');
}

function seriesColor(name: string, index: number): string {
  return SERIES_COLORS[name] ?? FALLBACK_COLORS[index % FALLBACK_COLORS.length];
}

function header(title: string): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" ` +
      `height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
    `<rect class="bg" width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    `<text class="title" x="${px(WIDTH / 2)}" y="26" text-anchor="middle" ` +
      `font-size="15">${title}</text>`,
  ].join('\n');
}

export function renderRatioSvg(fig: RatioFigure, labels: Labels = {}): string {
  const sizes = fig.medians.map((m) => m.n);
  const nLo = Math.min(...sizes);
  const nHi = Math.max(...sizes);
  const pad = nLo === nHi ? Math.max(1, 0.1 * nLo) : 0.06 * (nHi - nLo);
  const xScale = linearScale(nLo - pad, nHi + pad,
                             MARGIN.left, MARGIN.left + PLOT_W);
  const maxRatio = Math.max(...fig.points.map((p) => p.ratio));
  const yScale = linearScale(0, 1.08 * maxRatio,
                             MARGIN.top + PLOT_H, MARGIN.top);

  const parts = [header(labels.title ?? 'Wall-time ratio DCA / BDCA')];
  parts.push(axisBottom(xScale, labels.xLabel ?? 'problem size n'));
  parts.push(axisLeft(yScale, labels.yLabel ?? 'time ratio DCA/BDCA', false));
  parts.push('<g class="plot">');
  for (const p of fig.points) {
    const x = xScale.toPx(p.n);
    const y = yScale.toPx(p.ratio);
    parts.push(`<path class="ratio-point" data-n="${p.n}" ` +
               `data-start="${p.start}" stroke="#1f77b4" fill="none" d="` +
               `M ${px(x - 4)} ${px(y - 4)} L ${px(x + 4)} ${px(y + 4)} ` +
               `M ${px(x - 4)} ${px(y + 4)} L ${px(x + 4)} ${px(y - 4)}"/>`);
  }
  for (const m of fig.medians) {
    parts.push(`<circle class="ratio-median" data-n="${m.n}" ` +
               `cx="${px(xScale.toPx(m.n))}" cy="${px(yScale.toPx(m.ratio))}" ` +
               `r="6" fill="white" stroke="black" stroke-width="1.5"/>`);
  }
  parts.push('</g>');
  parts.push('</svg>');
  return parts.join('\n') + '\n';
}

export function renderTraceSvg(fig: TraceFigure, labels: Labels = {}): string {
  const allKs = fig.series.flatMap((s) => s.ks).concat(fig.lambda.ks);
  const allGaps = fig.series.flatMap((s) => s.gaps);
  const xScale = linearScale(0, Math.max(...allKs),
                             MARGIN.left, MARGIN.left + PLOT_W);
  const yScale = logScale(Math.min(...allGaps), Math.max(...allGaps),
                          MARGIN.top + PLOT_H, MARGIN.top);
  const lamMax = Math.max(...fig.lambda.values, 1);
  const lamScale = linearScale(0, 1.1 * lamMax,
                               MARGIN.top + PLOT_H, MARGIN.top, 5);

  const parts = [header(labels.title ?? 'Objective gap and step size per iteration')];
  parts.push(axisBottom(xScale, labels.xLabel ?? 'iteration k'));
  parts.push(axisLeft(yScale, labels.yLabel ?? 'phi(x_k) - phi*', true));
  parts.push(axisRight(lamScale, `step size lambda_k (${fig.lambda.name})`));
  parts.push('<g class="plot">');
  fig.series.forEach((s, i) => {
    const pts = s.ks.map((k, j) =>
      `${px(xScale.toPx(k))},${px(yScale.toPx(s.gaps[j]))}`).join(' ');
    parts.push(`<polyline class="phi-series" data-name="${s.name}" ` +
               `fill="none" stroke="${seriesColor(s.name, i)}" ` +
               `stroke-width="1.6" points="${pts}"/>`);
  });
  const lamPts = fig.lambda.ks.map((k, j) =>
    `${px(xScale.toPx(k))},${px(lamScale.toPx(fig.lambda.values[j]))}`)
    .join(' ');
  parts.push(`<polyline class="lambda-series" data-name="${fig.lambda.name}" ` +
             `fill="none" stroke="${LAMBDA_COLOR}" stroke-width="1.4" ` +
             `stroke-dasharray="2,4" points="${lamPts}"/>`);
  parts.push('</g>');

  const legend: string[] = [`<g class="legend" font-size="12">`];
  fig.series.forEach((s, i) => {
    const y = MARGIN.top + 14 + 16 * i;
    const x = MARGIN.left + PLOT_W - 150;
    legend.push(`<line x1="${px(x)}" y1="${px(y - 4)}" x2="${px(x + 22)}" ` +
                `y2="${px(y - 4)}" stroke="${seriesColor(s.name, i)}" ` +
                `stroke-width="2"/>`);
    legend.push(`<text x="${px(x + 28)}" y="${px(y)}">${s.name}</text>`);
  });
  const ly = MARGIN.top + 14 + 16 * fig.series.length;
  const lx = MARGIN.left + PLOT_W - 150;
  legend.push(`<line x1="${px(lx)}" y1="${px(ly - 4)}" x2="${px(lx + 22)}" ` +
              `y2="${px(ly - 4)}" stroke="${LAMBDA_COLOR}" stroke-width="2" ` +
              `stroke-dasharray="2,4"/>`);
  legend.push(`<text x="${px(lx + 28)}" y="${px(ly)}">lambda_k ` +
              `(right axis)</text>`);
  legend.push('</g>');
  parts.push(legend.join('\n'));
  parts.push('</svg>');
  return parts.join('\n') + '\n';
}
