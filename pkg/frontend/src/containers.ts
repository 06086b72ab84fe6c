/**
 * Writers for the toolkit's binary raster containers (little-endian):
 *
 *   HSC1: magic + u32 height,width,bands + h*w*b float32, band-sequential
 *   HSG1: magic + u32 height,width + h*w uint16 labels, row-major
 *
 * Input arrays arrive in MATLAB column-major order ([h, w] or [h, w, b]).
 */

export function encodeCube(
    height: number,
    width: number,
    bands: number,
    columnMajor: Float64Array,
): Buffer {
    const header = Buffer.alloc(16);
    header.write('HSC1', 0, 'latin1');
    header.writeUInt32LE(height, 4);
    header.writeUInt32LE(width, 8);
    header.writeUInt32LE(bands, 12);
    const body = Buffer.alloc(height * width * bands * 4);
    const plane = height * width;
    let out = 0;
    for (let band = 0; band < bands; band++) {
        for (let row = 0; row < height; row++) {
            for (let col = 0; col < width; col++) {
                body.writeFloatLE(columnMajor[row + col * height + band * plane], out);
                out += 4;
            }
        }
    }
    return Buffer.concat([header, body]);
}

export function encodeGroundTruth(
    height: number,
    width: number,
    columnMajor: Float64Array,
): Buffer {
    const header = Buffer.alloc(12);
    header.write('HSG1', 0, 'latin1');
    header.writeUInt32LE(height, 4);
    header.writeUInt32LE(width, 8);
    const body = Buffer.alloc(height * width * 2);
    let out = 0;
    for (let row = 0; row < height; row++) {
        for (let col = 0; col < width; col++) {
            const v = columnMajor[row + col * height];
            if (!Number.isInteger(v) || v < 0 || v > 65535) {
                throw new Error(
                    `label at (${row}, ${col}) is ${v}; labels must be integers in 0..65535`,
                );
            }
            body.writeUInt16LE(v, out);
            out += 2;
        }
    }
    return Buffer.concat([header, body]);
}
