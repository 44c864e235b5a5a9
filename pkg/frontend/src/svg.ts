/** Tiny deterministic SVG plotting surface: scales, axes, lines, markers. */

export interface Scale {
  (v: number): number;
  ticks: number[];
}

export function linearScale(lo: number, hi: number, a: number, b: number): Scale {
  if (hi === lo) {
    hi = lo + 1;
  }
  const f = ((v: number) => a + ((v - lo) / (hi - lo)) * (b - a)) as Scale;
  f.ticks = niceTicks(lo, hi);
  return f;
}

export function logScale(lo: number, hi: number, a: number, b: number): Scale {
  const llo = Math.log10(Math.max(lo, Number.MIN_VALUE));
  let lhi = Math.log10(Math.max(hi, Number.MIN_VALUE));
  if (lhi === llo) {
    lhi = llo + 1;
  }
  const f = ((v: number) =>
    a + ((Math.log10(Math.max(v, Number.MIN_VALUE)) - llo) / (lhi - llo)) * (b - a)) as Scale;
  const ticks: number[] = [];
  for (let e = Math.ceil(llo); e <= Math.floor(lhi); e += 1) {
    ticks.push(10 ** e);
  }
  f.ticks = ticks.length >= 2 ? ticks : [lo, hi];
  return f;
}

function niceTicks(lo: number, hi: number, count = 5): number[] {
  const span = hi - lo;
  const step = 10 ** Math.floor(Math.log10(span / count));
  const err = (span / count) / step;
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = step * mult;
  const start = Math.ceil(lo / s) * s;
  const ticks: number[] = [];
  for (let v = start; v <= hi + 1e-12 * span; v += s) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

const W = 640;
const H = 420;
const M = { left: 70, right: 20, top: 36, bottom: 50 };

export interface Frame {
  x: Scale;
  y: Scale;
  parts: string[];
}

export function frame(
  xlo: number,
  xhi: number,
  ylo: number,
  yhi: number,
  opts: { logx?: boolean; logy?: boolean; xlabel: string; ylabel: string; title: string },
): Frame {
  const x = (opts.logx ? logScale : linearScale)(xlo, xhi, M.left, W - M.right);
  const y = (opts.logy ? logScale : linearScale)(ylo, yhi, H - M.bottom, M.top);
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" viewBox="0 0 ${W} ${H}">`,
    `<rect width="${W}" height="${H}" fill="white"/>`,
    `<text x="${W / 2}" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">${esc(opts.title)}</text>`,
  );
  for (const t of x.ticks) {
    const px = x(t);
    parts.push(
      `<line x1="${fmt(px)}" y1="${M.top}" x2="${fmt(px)}" y2="${H - M.bottom}" stroke="#ddd"/>`,
      `<text x="${fmt(px)}" y="${H - M.bottom + 16}" text-anchor="middle" font-family="sans-serif" font-size="10">${label(t)}</text>`,
    );
  }
  for (const t of y.ticks) {
    const py = y(t);
    parts.push(
      `<line x1="${M.left}" y1="${fmt(py)}" x2="${W - M.right}" y2="${fmt(py)}" stroke="#ddd"/>`,
      `<text x="${M.left - 6}" y="${fmt(py + 3)}" text-anchor="end" font-family="sans-serif" font-size="10">${label(t)}</text>`,
    );
  }
  parts.push(
    `<rect x="${M.left}" y="${M.top}" width="${W - M.left - M.right}" height="${H - M.top - M.bottom}" fill="none" stroke="black"/>`,
    `<text x="${W / 2}" y="${H - 12}" text-anchor="middle" font-family="sans-serif" font-size="12">${esc(opts.xlabel)}</text>`,
    `<text x="16" y="${H / 2}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 16 ${H / 2})">${esc(opts.ylabel)}</text>`,
  );
  return { x, y, parts };
}

export function polyline(f: Frame, xs: number[], ys: number[], color: string, dash = ''): void {
  const pts = xs.map((v, i) => `${fmt(f.x(v))},${fmt(f.y(ys[i]))}`).join(' ');
  const dashAttr = dash ? ` stroke-dasharray="${dash}"` : '';
  f.parts.push(`<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="1.5"${dashAttr}/>`);
}

export function markers(f: Frame, xs: number[], ys: number[], color: string, r = 2.5): void {
  for (let i = 0; i < xs.length; i += 1) {
    f.parts.push(
      `<circle cx="${fmt(f.x(xs[i]))}" cy="${fmt(f.y(ys[i]))}" r="${r}" fill="${color}"/>`,
    );
  }
}

export function legend(f: Frame, entries: Array<[string, string]>): void {
  let yPos = M.top + 14;
  for (const [name, color] of entries) {
    f.parts.push(
      `<line x1="${W - M.right - 130}" y1="${yPos - 4}" x2="${W - M.right - 106}" y2="${yPos - 4}" stroke="${color}" stroke-width="2"/>`,
      `<text x="${W - M.right - 100}" y="${yPos}" font-family="sans-serif" font-size="11">${esc(name)}</text>`,
    );
    yPos += 16;
  }
}

export function finish(f: Frame): string {
  return f.parts.join('\n') + '\n</svg>\n';
}

function fmt(v: number): string {
  return v.toFixed(2);
}

function label(v: number): string {
  const a = Math.abs(v);
  if (a !== 0 && (a >= 1e4 || a < 1e-3)) {
    return v.toExponential(0);
  }
  return String(Number(v.toPrecision(6)));
}

function esc(s: string): string {
  return s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');
}
