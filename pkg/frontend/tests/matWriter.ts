/**
 * Minimal MAT 5 writer used only by the tests, so the converter can be
 * exercised without shipping benchmark downloads.
 */

import * as zlib from 'node:zlib';

export interface TestVariable {
    name: string;
    dims: number[];
    /** column-major values */
    data: number[] | Float64Array;
    /** storage element type; the array class stays double for 'double' */
    storage?: 'double' | 'uint16' | 'uint8' | 'int32' | 'single';
    compress?: boolean;
}

const CLASS_OF = { double: 6, single: 7, uint8: 9, uint16: 11, int32: 12 } as const;
const TYPE_OF = { double: 9, single: 7, uint8: 2, uint16: 4, int32: 5 } as const;
const BYTES_OF = { double: 8, single: 4, uint8: 1, uint16: 2, int32: 4 } as const;

function padded(buf: Buffer): Buffer {
    const rem = buf.length % 8;
    return rem === 0 ? buf : Buffer.concat([buf, Buffer.alloc(8 - rem)]);
}

function element(type: number, payload: Buffer, small = false): Buffer {
    if (small) {
        if (payload.length > 4) throw new Error('small element payload > 4 bytes');
        const out = Buffer.alloc(8);
        out.writeUInt32LE(type | (payload.length << 16), 0);
        payload.copy(out, 4);
        return out;
    }
    const tag = Buffer.alloc(8);
    tag.writeUInt32LE(type, 0);
    tag.writeUInt32LE(payload.length, 4);
    // compressed elements (type 15) are written unpadded, like real writers
    return Buffer.concat([tag, type === 15 ? payload : padded(payload)]);
}

function numericPayload(v: TestVariable): Buffer {
    const storage = v.storage ?? 'double';
    const out = Buffer.alloc(v.data.length * BYTES_OF[storage]);
    Array.from(v.data).forEach((value, i) => {
        switch (storage) {
            case 'double':
                out.writeDoubleLE(value, 8 * i);
                break;
            case 'single':
                out.writeFloatLE(value, 4 * i);
                break;
            case 'uint8':
                out.writeUInt8(value, i);
                break;
            case 'uint16':
                out.writeUInt16LE(value, 2 * i);
                break;
            case 'int32':
                out.writeInt32LE(value, 4 * i);
                break;
        }
    });
    return out;
}

function matrixElement(v: TestVariable): Buffer {
    const storage = v.storage ?? 'double';
    const flags = Buffer.alloc(8);
    // storing compact integer data under a double class mirrors what
    // common writers emit for integer-valued doubles
    flags.writeUInt32LE(storage === 'double' ? CLASS_OF.double : CLASS_OF[storage], 0);
    const dims = Buffer.alloc(4 * v.dims.length);
    v.dims.forEach((d, i) => dims.writeInt32LE(d, 4 * i));
    const nameBytes = Buffer.from(v.name, 'latin1');
    const body = Buffer.concat([
        element(6, flags),
        element(5, dims),
        element(1, nameBytes, nameBytes.length <= 4),
        element(TYPE_OF[storage], numericPayload(v)),
    ]);
    return element(14, body);
}

export function writeMat5(variables: TestVariable[]): Buffer {
    const header = Buffer.alloc(128);
    header.write('MATLAB 5.0 MAT-file, written by the converter test suite', 0, 'latin1');
    header.writeUInt16LE(0x0100, 124);
    header.write('IM', 126, 'latin1');

    const elements = variables.map((v) => {
        const raw = matrixElement(v);
        if (!v.compress) return raw;
        return element(15, zlib.deflateSync(raw));
    });
    return Buffer.concat([header, ...elements]);
}
