import { describe, expect, it } from 'vitest';

import { readMatFile } from '../src/mat5.js';
import { writeMat5 } from './matWriter.js';

describe('readMatFile', () => {
    it('round-trips a 2-D double matrix', () => {
        const buf = writeMat5([
            { name: 'labels', dims: [2, 3], data: [1, 2, 3, 4, 5, 6] },
        ]);
        const vars = readMatFile(buf);
        expect(vars).toHaveLength(1);
        expect(vars[0].name).toBe('labels');
        expect(vars[0].dims).toEqual([2, 3]);
        expect([...vars[0].data]).toEqual([1, 2, 3, 4, 5, 6]);
        expect(vars[0].integerValued).toBe(true);
    });

    it('round-trips a 3-D cube stored as int32', () => {
        const data = Array.from({ length: 24 }, (_, i) => i * 100);
        const buf = writeMat5([
            { name: 'scene', dims: [2, 3, 4], data, storage: 'int32' },
        ]);
        const vars = readMatFile(buf);
        expect(vars[0].dims).toEqual([2, 3, 4]);
        expect([...vars[0].data]).toEqual(data);
        expect(vars[0].sourceType).toBe('int32');
    });

    it('reads zlib-compressed elements', () => {
        const buf = writeMat5([
            {
                name: 'compressed_scene',
                dims: [3, 3],
                data: [9, 8, 7, 6, 5, 4, 3, 2, 1],
                storage: 'uint16',
                compress: true,
            },
        ]);
        const vars = readMatFile(buf);
        expect(vars[0].name).toBe('compressed_scene');
        expect([...vars[0].data]).toEqual([9, 8, 7, 6, 5, 4, 3, 2, 1]);
    });

    it('walks past unpadded compressed elements to later variables', () => {
        const buf = writeMat5([
            { name: 'first', dims: [3, 2], data: [1, 2, 3, 4, 5, 6], compress: true },
            { name: 'second', dims: [2, 2], data: [7, 8, 9, 10], compress: true },
            { name: 'third', dims: [1, 2], data: [11, 12] },
        ]);
        const names = readMatFile(buf).map((v) => v.name);
        expect(names).toEqual(['first', 'second', 'third']);
    });

    it('reads several variables including short (small-element) names', () => {
        const buf = writeMat5([
            { name: 'gt', dims: [2, 2], data: [1, 0, 2, 1], storage: 'uint8' },
            { name: 'long_cube_name', dims: [2, 2, 1], data: [5, 6, 7, 8] },
        ]);
        const names = readMatFile(buf).map((v) => v.name);
        expect(names).toEqual(['gt', 'long_cube_name']);
    });

    it('flags fractional data as not integer-valued', () => {
        const buf = writeMat5([{ name: 'x', dims: [1, 3], data: [0.5, 1, 2] }]);
        expect(readMatFile(buf)[0].integerValued).toBe(false);
    });

    it('rejects files without the MAT 5 endian tag', () => {
        expect(() => readMatFile(Buffer.alloc(200))).toThrow(/endian tag/);
        expect(() => readMatFile(Buffer.alloc(10))).toThrow(/shorter/);
    });

    it('rejects big-endian containers explicitly', () => {
        const buf = writeMat5([{ name: 'x', dims: [1, 1], data: [1] }]);
        buf.write('MI', 126, 'latin1');
        expect(() => readMatFile(buf)).toThrow(/big-endian/);
    });
});
