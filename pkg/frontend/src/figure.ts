/** Figure kinds over solver CSVs: convergence, trace, scatter, sweep. */

import { readFileSync, writeFileSync } from 'fs';

import { numericColumn, parseCsv, Table } from './csv.js';
import { finish, frame, legend, markers, polyline } from './svg.js';

export type FigureKind = 'convergence' | 'trace' | 'scatter' | 'sweep';

export interface FigureSpec {
  kind: FigureKind;
  input: string;
  output: string;
  x: string;
  y: string;
  /** optional column holding a closed-form bound to overlay */
  bound?: string;
  xlabel?: string;
  ylabel?: string;
  title?: string;
}

function extent(values: number[], padFrac = 0.05): [number, number] {
  const finite = values.filter((v) => Number.isFinite(v));
  const lo = Math.min(...finite);
  const hi = Math.max(...finite);
  const pad = (hi - lo || Math.abs(lo) || 1) * padFrac;
  return [lo - pad, hi + pad];
}

function positiveExtent(values: number[]): [number, number] {
  const pos = values.filter((v) => Number.isFinite(v) && v > 0);
  if (pos.length === 0) {
    return [1e-16, 1];
  }
  return [Math.min(...pos), Math.max(...pos)];
}

export function render(spec: FigureSpec): string {
  const table = parseCsv(readFileSync(spec.input, 'utf8'), spec.input);
  const xs = numericColumn(table, spec.x);
  const ys = numericColumn(table, spec.y);
  const bound = spec.bound ? numericColumn(table, spec.bound) : undefined;
  const labels = {
    xlabel: spec.xlabel ?? spec.x,
    ylabel: spec.ylabel ?? spec.y,
    title: spec.title ?? `${spec.kind}: ${spec.y} vs ${spec.x}`,
  };

  let svg: string;
  switch (spec.kind) {
    case 'convergence':
      svg = renderConvergence(xs, ys, labels);
      break;
    case 'trace':
      svg = renderTrace(xs, ys, labels);
      break;
    case 'scatter':
      svg = renderScatter(xs, ys, bound, labels);
      break;
    case 'sweep':
      svg = renderSweep(xs, ys, labels);
      break;
    default:
      throw new Error(`unknown figure kind '${(spec as FigureSpec).kind}'`);
  }
  writeFileSync(spec.output, svg);
  return spec.output;
}

type Labels = { xlabel: string; ylabel: string; title: string };

function renderConvergence(xs: number[], ys: number[], labels: Labels): string {
  const [xlo, xhi] = positiveExtent(xs);
  const [ylo, yhi] = positiveExtent(ys);
  const f = frame(xlo, xhi, ylo, yhi, { logx: true, logy: true, ...labels });
  polyline(f, xs, ys, '#1f77b4');
  markers(f, xs, ys, '#1f77b4');
  return finish(f);
}

function renderTrace(xs: number[], ys: number[], labels: Labels): string {
  const [xlo, xhi] = extent(xs);
  const [ylo, yhi] = extent(ys);
  const f = frame(xlo, xhi, ylo, yhi, { ...labels });
  polyline(f, xs, ys, '#1f77b4');
  return finish(f);
}

function renderScatter(
  xs: number[],
  ys: number[],
  bound: number[] | undefined,
  labels: Labels,
): string {
  const all = bound ? ys.concat(bound) : ys;
  const [xlo, xhi] = extent(xs);
  const [ylo, yhi] = extent(all);
  const f = frame(xlo, xhi, ylo, yhi, { ...labels });
  markers(f, xs, ys, '#1f77b4');
  if (bound) {
    const order = xs.map((_, i) => i).sort((a, b) => xs[a] - xs[b]);
    polyline(
      f,
      order.map((i) => xs[i]),
      order.map((i) => bound[i]),
      '#d62728',
      '6 3',
    );
    legend(f, [
      ['samples', '#1f77b4'],
      ['bound', '#d62728'],
    ]);
  }
  return finish(f);
}

function renderSweep(xs: number[], ys: number[], labels: Labels): string {
  const order = xs.map((_, i) => i).sort((a, b) => xs[a] - xs[b]);
  const sx = order.map((i) => xs[i]);
  const sy = order.map((i) => ys[i]);
  const [xlo, xhi] = extent(sx);
  const [ylo, yhi] = extent(sy);
  const f = frame(xlo, xhi, ylo, yhi, { ...labels });
  polyline(f, sx, sy, '#2ca02c');
  markers(f, sx, sy, '#2ca02c', 3.5);
  return finish(f);
}
