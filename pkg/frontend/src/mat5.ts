/**
 * Minimal MAT 5 container reader: little-endian numeric arrays only,
 * including zlib-compressed elements (the format the benchmark scene
 * downloads use). Cell/struct/char/sparse entries are skipped.
 */

import * as zlib from 'node:zlib';

export interface MatVariable {
    name: string;
    /** dimensions as stored (column-major order) */
    dims: number[];
    /** values in column-major order */
    data: Float64Array;
    integerValued: boolean;
    sourceType: string;
}

// data element types
const MI_INT8 = 1;
const MI_UINT8 = 2;
const MI_INT16 = 3;
const MI_UINT16 = 4;
const MI_INT32 = 5;
const MI_UINT32 = 6;
const MI_SINGLE = 7;
const MI_DOUBLE = 9;
const MI_INT64 = 12;
const MI_UINT64 = 13;
const MI_MATRIX = 14;
const MI_COMPRESSED = 15;

// numeric array classes (mxDOUBLE_CLASS .. mxUINT64_CLASS)
const NUMERIC_CLASSES = new Set([6, 7, 8, 9, 10, 11, 12, 13, 14, 15]);

const TYPE_NAMES: Record<number, string> = {
    [MI_INT8]: 'int8',
    [MI_UINT8]: 'uint8',
    [MI_INT16]: 'int16',
    [MI_UINT16]: 'uint16',
    [MI_INT32]: 'int32',
    [MI_UINT32]: 'uint32',
    [MI_SINGLE]: 'single',
    [MI_DOUBLE]: 'double',
    [MI_INT64]: 'int64',
    [MI_UINT64]: 'uint64',
};

interface Tag {
    type: number;
    size: number;
    dataOff: number;
    next: number;
}

function readTag(buf: Buffer, off: number): Tag {
    if (off + 4 > buf.length) {
        throw new Error(`element tag at byte ${off} runs past end of file`);
    }
    const first = buf.readUInt32LE(off);
    if ((first & 0xffff0000) !== 0) {
        // small-element format: byte count in the high 16 bits
        return {
            type: first & 0xffff,
            size: first >>> 16,
            dataOff: off + 4,
            next: off + 8,
        };
    }
    const size = buf.readUInt32LE(off + 4);
    const padded = (size + 7) & ~7;
    return { type: first, size, dataOff: off + 8, next: off + 8 + padded };
}

function decodeNumeric(buf: Buffer, tag: Tag): Float64Array {
    const bytes = buf.subarray(tag.dataOff, tag.dataOff + tag.size);
    if (bytes.length < tag.size) {
        throw new Error('numeric data element truncated');
    }
    const copy = Buffer.from(bytes); // alignment-safe view
    const view = (ctor: any) =>
        new ctor(copy.buffer, copy.byteOffset, tag.size / ctor.BYTES_PER_ELEMENT);
    switch (tag.type) {
        case MI_INT8:
            return Float64Array.from(view(Int8Array));
        case MI_UINT8:
            return Float64Array.from(view(Uint8Array));
        case MI_INT16:
            return Float64Array.from(view(Int16Array));
        case MI_UINT16:
            return Float64Array.from(view(Uint16Array));
        case MI_INT32:
            return Float64Array.from(view(Int32Array));
        case MI_UINT32:
            return Float64Array.from(view(Uint32Array));
        case MI_SINGLE:
            return Float64Array.from(view(Float32Array));
        case MI_DOUBLE:
            return Float64Array.from(view(Float64Array));
        case MI_INT64:
            return Float64Array.from(view(BigInt64Array), Number);
        case MI_UINT64:
            return Float64Array.from(view(BigUint64Array), Number);
        default:
            throw new Error(`unsupported numeric element type ${tag.type}`);
    }
}

function parseMatrix(payload: Buffer): MatVariable | null {
    let off = 0;
    const flagsTag = readTag(payload, off);
    if (flagsTag.type !== MI_UINT32 || flagsTag.size < 8) {
        throw new Error('malformed matrix element: bad array-flags block');
    }
    const flags = payload.readUInt32LE(flagsTag.dataOff);
    const arrayClass = flags & 0xff;
    const complex = (flags & 0x0800) !== 0;
    off = flagsTag.next;

    const dimsTag = readTag(payload, off);
    if (dimsTag.type !== MI_INT32) {
        throw new Error('malformed matrix element: bad dimensions block');
    }
    const dims: number[] = [];
    for (let i = 0; i < dimsTag.size / 4; i++) {
        dims.push(payload.readInt32LE(dimsTag.dataOff + 4 * i));
    }
    off = dimsTag.next;

    const nameTag = readTag(payload, off);
    const name = payload
        .subarray(nameTag.dataOff, nameTag.dataOff + nameTag.size)
        .toString('latin1');
    off = nameTag.next;

    if (!NUMERIC_CLASSES.has(arrayClass) || complex) {
        return null; // not a candidate raster; skip quietly
    }

    const dataTag = readTag(payload, off);
    const data = decodeNumeric(payload, dataTag);
    const count = dims.reduce((a, b) => a * b, 1);
    if (data.length !== count) {
        throw new Error(
            `variable ${name}: expected ${count} values, found ${data.length}`,
        );
    }
    let integerValued = true;
    for (const v of data) {
        if (!Number.isInteger(v)) {
            integerValued = false;
            break;
        }
    }
    return {
        name,
        dims,
        data,
        integerValued,
        sourceType: TYPE_NAMES[dataTag.type] ?? `type-${dataTag.type}`,
    };
}

export function readMatFile(buf: Buffer): MatVariable[] {
    if (buf.length < 128) {
        throw new Error('not a MAT 5 container: file shorter than the header');
    }
    const endian = buf.subarray(126, 128).toString('latin1');
    if (endian === 'MI') {
        throw new Error('big-endian MAT containers are not supported');
    }
    if (endian !== 'IM') {
        throw new Error('not a MAT 5 container: missing endian tag');
    }
    const variables: MatVariable[] = [];
    let off = 128;
    while (off + 8 <= buf.length) {
        const tag = readTag(buf, off);
        if (tag.type === MI_COMPRESSED) {
            // compressed elements are the one kind not padded to 8 bytes
            tag.next = tag.dataOff + tag.size;
            const inflated = zlib.inflateSync(
                buf.subarray(tag.dataOff, tag.dataOff + tag.size),
            );
            const inner = readTag(inflated, 0);
            if (inner.type === MI_MATRIX) {
                const v = parseMatrix(
                    inflated.subarray(inner.dataOff, inner.dataOff + inner.size),
                );
                if (v) variables.push(v);
            }
        } else if (tag.type === MI_MATRIX) {
            const v = parseMatrix(buf.subarray(tag.dataOff, tag.dataOff + tag.size));
            if (v) variables.push(v);
        }
        off = tag.next;
    }
    return variables;
}
