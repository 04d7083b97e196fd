/** Tiny deterministic PNG encoder for heatmap panels (8-bit RGB,
 *  no filtering, fixed zlib settings) plus a perceptually uniform
 *  dark-to-light colormap. */

import { deflateSync, constants } from "node:zlib";

const CRC_TABLE: number[] = (() => {
  const table = new Array<number>(256);
  for (let n = 0; n < 256; n += 1) {
    let c = n;
    for (let k = 0; k < 8; k += 1) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    }
    table[n] = c >>> 0;
  }
  return table;
})();

export function crc32(data: Uint8Array): number {
  let crc = 0xffffffff;
  for (const byte of data) {
    crc = CRC_TABLE[(crc ^ byte) & 0xff] ^ (crc >>> 8);
  }
  return (crc ^ 0xffffffff) >>> 0;
}

function chunk(type: string, payload: Uint8Array): Buffer {
  const header = Buffer.alloc(4);
  header.writeUInt32BE(payload.length);
  const body = Buffer.concat([Buffer.from(type, "ascii"), payload]);
  const crc = Buffer.alloc(4);
  crc.writeUInt32BE(crc32(body));
  return Buffer.concat([header, body, crc]);
}

/** Encode rows of RGB triples (length = width*height*3) as a PNG. */
export function encodePng(
  width: number,
  height: number,
  rgb: Uint8Array,
): Buffer {
  if (rgb.length !== width * height * 3) {
    throw new Error(
      `rgb buffer has ${rgb.length} bytes, expected ${width * height * 3}`,
    );
  }
  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(width, 0);
  ihdr.writeUInt32BE(height, 4);
  ihdr[8] = 8; // bit depth
  ihdr[9] = 2; // color type: truecolor
  const scanlines = Buffer.alloc(height * (1 + width * 3));
  for (let y = 0; y < height; y += 1) {
    const offset = y * (1 + width * 3);
    scanlines[offset] = 0; // filter: none
    rgb
      .subarray(y * width * 3, (y + 1) * width * 3)
      .forEach((v, i) => (scanlines[offset + 1 + i] = v));
  }
  const idat = deflateSync(scanlines, { level: constants.Z_BEST_COMPRESSION });
  return Buffer.concat([
    Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]),
    chunk("IHDR", ihdr),
    chunk("IDAT", idat),
    chunk("IEND", new Uint8Array(0)),
  ]);
}

// Anchor points of a dark-to-light perceptually uniform map.
const ANCHORS: Array<[number, number, number]> = [
  [68, 1, 84],
  [71, 44, 122],
  [59, 81, 139],
  [44, 113, 142],
  [33, 144, 141],
  [39, 173, 129],
  [92, 200, 99],
  [170, 220, 50],
  [253, 231, 37],
];

export function colormap(value: number): [number, number, number] {
  const v = Math.min(1, Math.max(0, value));
  const pos = v * (ANCHORS.length - 1);
  const i = Math.min(ANCHORS.length - 2, Math.floor(pos));
  const frac = pos - i;
  const a = ANCHORS[i];
  const b = ANCHORS[i + 1];
  return [
    Math.round(a[0] + frac * (b[0] - a[0])),
    Math.round(a[1] + frac * (b[1] - a[1])),
    Math.round(a[2] + frac * (b[2] - a[2])),
  ];
}

/** Render a matrix (rows = momentum cells from -pi upward) to a base64
 *  PNG with the lowest momentum at the bottom of the image. */
export function heatmapPngBase64(values: number[][]): string {
  const height = values.length;
  const width = values[0].length;
  let min = Infinity;
  let max = -Infinity;
  for (const row of values) {
    for (const v of row) {
      if (v < min) min = v;
      if (v > max) max = v;
    }
  }
  const span = max - min || 1;
  const rgb = new Uint8Array(width * height * 3);
  for (let y = 0; y < height; y += 1) {
    const source = values[height - 1 - y]; // image row 0 = largest p
    for (let x = 0; x < width; x += 1) {
      const [red, green, blue] = colormap((source[x] - min) / span);
      const offset = (y * width + x) * 3;
      rgb[offset] = red;
      rgb[offset + 1] = green;
      rgb[offset + 2] = blue;
    }
  }
  return encodePng(width, height, rgb).toString("base64");
}
