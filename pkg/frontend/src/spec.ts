/** Figure spec files: flat `key = value` lines, # comments. */

import { readFileSync } from 'fs';

import { FigureKind, FigureSpec } from './figure.js';

const KINDS: FigureKind[] = ['convergence', 'trace', 'scatter', 'sweep'];

export class SpecError extends Error {
  constructor(msg: string) {
    super(msg);
    this.name = 'SpecError';
  }
}

export function parseSpec(text: string, path: string): FigureSpec {
  const entries = new Map<string, string>();
  text.split(/\r?\n/).forEach((line, i) => {
    const stripped = line.replace(/#.*$/, '').trim();
    if (!stripped) {
      return;
    }
    const eq = stripped.indexOf('=');
    if (eq < 0) {
      throw new SpecError(`${path}:${i + 1}: expected 'key = value'`);
    }
    entries.set(stripped.slice(0, eq).trim(), stripped.slice(eq + 1).trim());
  });
  for (const key of ['kind', 'input', 'output', 'x', 'y']) {
    if (!entries.has(key)) {
      throw new SpecError(`${path}: missing required key '${key}'`);
    }
  }
  const kind = entries.get('kind') as FigureKind;
  if (!KINDS.includes(kind)) {
    throw new SpecError(`${path}: kind must be one of ${KINDS.join(', ')}`);
  }
  return {
    kind,
    input: entries.get('input')!,
    output: entries.get('output')!,
    x: entries.get('x')!,
    y: entries.get('y')!,
    bound: entries.get('bound'),
    xlabel: entries.get('xlabel'),
    ylabel: entries.get('ylabel'),
    title: entries.get('title'),
  };
}

export function loadSpec(path: string): FigureSpec {
  return parseSpec(readFileSync(path, 'utf8'), path);
}
