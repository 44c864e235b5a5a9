#!/usr/bin/env node
/** `plots render --spec <file>`: one SVG per spec file. */

import { render } from './figure.js';
import { loadSpec } from './spec.js';

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  if (command !== 'render') {
    console.error('usage: plots render --spec <file> [--spec <file> ...]');
    return 2;
  }
  const specs: string[] = [];
  for (let i = 0; i < rest.length; i += 1) {
    if (rest[i] === '--spec' && i + 1 < rest.length) {
      specs.push(rest[i + 1]);
      i += 1;
    } else {
      console.error(`unknown argument '${rest[i]}'`);
      return 2;
    }
  }
  if (specs.length === 0) {
    console.error('at least one --spec is required');
    return 2;
  }
  for (const path of specs) {
    try {
      const out = render(loadSpec(path));
      console.log(`wrote ${out}`);
    } catch (err) {
      console.error(`${path}: ${(err as Error).name}: ${(err as Error).message}`);
      return 1;
    }
  }
  return 0;
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
