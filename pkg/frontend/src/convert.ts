import * as fs from 'node:fs';

import { encodeCube, encodeGroundTruth } from './containers.js';
import { MatVariable, readMatFile } from './mat5.js';

export type OutputKind = 'cube' | 'gt';

export interface ConversionJob {
    input: string;
    output: string;
    kind: OutputKind;
    varName?: string;
}

export interface Summary {
    variable: string;
    sourceType: string;
    height: number;
    width: number;
    bands?: number;
    min: number;
    max: number;
    /** nonzero label -> pixel count (ground truth only) */
    labelHistogram?: Map<number, number>;
    numClasses?: number;
    warnings: string[];
}

function isCubeCandidate(v: MatVariable): boolean {
    return v.dims.length === 3;
}

function isGtCandidate(v: MatVariable): boolean {
    return v.dims.length === 2 && v.integerValued;
}

function pickVariable(vars: MatVariable[], job: ConversionJob): MatVariable {
    const names = vars.map((v) => `${v.name}${JSON.stringify(v.dims)}`).join(', ');
    if (job.varName !== undefined) {
        const found = vars.find((v) => v.name === job.varName);
        if (!found) {
            throw new Error(
                `variable ${job.varName!} not found; available: ${names || '(none)'}`,
            );
        }
        return found;
    }
    // auto-detection: the largest candidate of the requested kind
    const wanted = job.kind === 'cube' ? isCubeCandidate : isGtCandidate;
    const candidates = vars.filter(wanted);
    if (candidates.length === 0) {
        const kindText =
            job.kind === 'cube' ? '3-D variable' : '2-D integer-valued variable';
        throw new Error(`no ${kindText} found; available: ${names || '(none)'}`);
    }
    return candidates.reduce((a, b) => (b.data.length > a.data.length ? b : a));
}

function validateKind(v: MatVariable, kind: OutputKind): void {
    if (kind === 'cube' && v.dims.length !== 3) {
        throw new Error(
            `cube output requires a 3-D variable; ${v.name} has dims ${JSON.stringify(v.dims)}`,
        );
    }
    if (kind === 'gt') {
        if (v.dims.length !== 2) {
            throw new Error(
                `ground-truth output requires a 2-D variable; ${v.name} has dims ${JSON.stringify(v.dims)}`,
            );
        }
        if (!v.integerValued) {
            throw new Error(
                `ground-truth output requires integer labels; ${v.name} holds fractional values`,
            );
        }
    }
}

export function convert(job: ConversionJob): Summary {
    const vars = readMatFile(fs.readFileSync(job.input));
    const chosen = pickVariable(vars, job);
    validateKind(chosen, job.kind);

    const warnings: string[] = [];
    // cross-check spatial dims against the other raster in the same file
    const otherKind = job.kind === 'cube' ? isGtCandidate : isCubeCandidate;
    const other = vars.filter((v) => v !== chosen).find(otherKind);
    if (
        other &&
        (other.dims[0] !== chosen.dims[0] || other.dims[1] !== chosen.dims[1])
    ) {
        warnings.push(
            `spatial dimensions of ${chosen.name} (${chosen.dims[0]}x${chosen.dims[1]}) ` +
                `disagree with ${other.name} (${other.dims[0]}x${other.dims[1]}) in the same file`,
        );
    }

    const [height, width] = chosen.dims;
    let min = Infinity;
    let max = -Infinity;
    for (const v of chosen.data) {
        if (v < min) min = v;
        if (v > max) max = v;
    }

    const summary: Summary = {
        variable: chosen.name,
        sourceType: chosen.sourceType,
        height,
        width,
        min,
        max,
        warnings,
    };
    if (job.kind === 'cube') {
        summary.bands = chosen.dims[2];
        fs.writeFileSync(
            job.output,
            encodeCube(height, width, chosen.dims[2], chosen.data),
        );
    } else {
        const histogram = new Map<number, number>();
        for (const v of chosen.data) {
            if (v !== 0) histogram.set(v, (histogram.get(v) ?? 0) + 1);
        }
        summary.labelHistogram = new Map(
            [...histogram.entries()].sort((a, b) => a[0] - b[0]),
        );
        summary.numClasses = summary.labelHistogram.size;
        fs.writeFileSync(job.output, encodeGroundTruth(height, width, chosen.data));
    }
    return summary;
}

export function formatSummary(job: ConversionJob, s: Summary): string {
    const lines: string[] = [];
    const dims =
        job.kind === 'cube'
            ? `${s.height}x${s.width} pixels, ${s.bands} bands`
            : `${s.height}x${s.width} pixels`;
    lines.push(`${job.input} -> ${job.output}`);
    lines.push(`  variable: ${s.variable} (${s.sourceType}), ${dims}`);
    lines.push(`  value range: ${s.min} .. ${s.max}`);
    if (s.labelHistogram) {
        lines.push(`  classes: ${s.numClasses} non-zero labels`);
        for (const [label, count] of s.labelHistogram) {
            lines.push(`    class ${label}: ${count} pixels`);
        }
    }
    for (const w of s.warnings) {
        lines.push(`  warning: ${w}`);
    }
    return lines.join('\n');
}
