#!/usr/bin/env node
import { parseArgs } from 'node:util';

import { convert, formatSummary, OutputKind } from './convert.js';

const USAGE =
    'usage: hsi-convert <input.mat> <output> --kind {cube|gt} [--var NAME]';

export function main(argv: string[]): number {
    let parsed;
    try {
        parsed = parseArgs({
            args: argv,
            allowPositionals: true,
            options: {
                kind: { type: 'string' },
                var: { type: 'string' },
            },
        });
    } catch (err) {
        console.error(String(err instanceof Error ? err.message : err));
        console.error(USAGE);
        return 2;
    }
    const { positionals, values } = parsed;
    if (positionals.length !== 2 || (values.kind !== 'cube' && values.kind !== 'gt')) {
        console.error(USAGE);
        return 2;
    }
    const job = {
        input: positionals[0],
        output: positionals[1],
        kind: values.kind as OutputKind,
        varName: values.var,
    };
    try {
        const summary = convert(job);
        console.log(formatSummary(job, summary));
        return 0;
    } catch (err) {
        console.error(`error: ${err instanceof Error ? err.message : err}`);
        return 1;
    }
}

if (import.meta.url === `file://${process.argv[1]}`) {
    process.exit(main(process.argv.slice(2)));
}
