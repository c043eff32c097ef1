/**
 * Software RGBA canvas with just enough drawing primitives for plots:
 * rects, (dashed) lines, triangle markers and a 5x7 bitmap font.
 */

export type RGB = readonly [number, number, number];

export const BLACK: RGB = [0, 0, 0];
export const WHITE: RGB = [255, 255, 255];
export const GRAY: RGB = [130, 130, 130];
export const LIGHT: RGB = [225, 225, 225];

/** Line colors, matplotlib-ish default cycle. */
export const PALETTE: RGB[] = [
  [31, 119, 180],
  [255, 127, 14],
  [44, 160, 44],
  [214, 39, 40],
  [148, 103, 189],
  [140, 86, 75],
];

// Glyphs are 5 columns x 7 rows; '#' marks a lit pixel.  Uppercase input is
// lowered before lookup, unknown characters render as a hollow box.
const GLYPH_SOURCE: Record<string, string> = {
  "0": ".###. #...# #..## #.#.# ##..# #...# .###.",
  "1": "..#.. .##.. ..#.. ..#.. ..#.. ..#.. .###.",
  "2": ".###. #...# ....# ...#. ..#.. .#... #####",
  "3": ".###. #...# ....# ..##. ....# #...# .###.",
  "4": "...#. ..##. .#.#. #..#. ##### ...#. ...#.",
  "5": "##### #.... ####. ....# ....# #...# .###.",
  "6": "..##. .#... #.... ####. #...# #...# .###.",
  "7": "##### ....# ...#. ..#.. .#... .#... .#...",
  "8": ".###. #...# #...# .###. #...# #...# .###.",
  "9": ".###. #...# #...# .#### ....# ...#. .##..",
  a: "..... ..... .###. ....# .#### #...# .####",
  b: "#.... #.... ####. #...# #...# #...# ####.",
  c: "..... ..... .###. #.... #.... #...# .###.",
  d: "....# ....# .#### #...# #...# #...# .####",
  e: "..... ..... .###. #...# ##### #.... .###.",
  f: "..##. .#..# .#... ###.. .#... .#... .#...",
  g: "..... .#### #...# #...# .#### ....# .###.",
  h: "#.... #.... ####. #...# #...# #...# #...#",
  i: "..#.. ..... .##.. ..#.. ..#.. ..#.. .###.",
  j: "...#. ..... ..##. ...#. ...#. #..#. .##..",
  k: "#.... #.... #..#. #.#.. ##... #.#.. #..#.",
  l: ".##.. ..#.. ..#.. ..#.. ..#.. ..#.. .###.",
  m: "..... ..... ##.#. #.#.# #.#.# #.#.# #...#",
  n: "..... ..... ####. #...# #...# #...# #...#",
  o: "..... ..... .###. #...# #...# #...# .###.",
  p: "..... ####. #...# #...# ####. #.... #....",
  q: "..... .#### #...# #...# .#### ....# ....#",
  r: "..... ..... #.##. ##..# #.... #.... #....",
  s: "..... ..... .#### #.... .###. ....# ####.",
  t: ".#... .#... ###.. .#... .#... .#..# ..##.",
  u: "..... ..... #...# #...# #...# #..## .##.#",
  v: "..... ..... #...# #...# #...# .#.#. ..#..",
  w: "..... ..... #...# #.#.# #.#.# #.#.# .#.#.",
  x: "..... ..... #...# .#.#. ..#.. .#.#. #...#",
  y: "..... #...# #...# .#### ....# #...# .###.",
  z: "..... ..... ##### ...#. ..#.. .#... #####",
  " ": "..... ..... ..... ..... ..... ..... .....",
  ".": "..... ..... ..... ..... ..... .##.. .##..",
  ",": "..... ..... ..... ..... .##.. ..#.. .#...",
  "-": "..... ..... ..... .###. ..... ..... .....",
  "+": "..... ..#.. ..#.. ##### ..#.. ..#.. .....",
  "/": "....# ....# ...#. ..#.. .#... #.... #....",
  "(": "...#. ..#.. .#... .#... .#... ..#.. ...#.",
  ")": ".#... ..#.. ...#. ...#. ...#. ..#.. .#...",
  _: "..... ..... ..... ..... ..... ..... #####",
  ":": "..... .##.. .##.. ..... .##.. .##.. .....",
  "=": "..... ..... ##### ..... ##### ..... .....",
  "~": "..... ..... .##.# #.##. ..... ..... .....",
  "?": ".###. #...# ....# ..##. ..#.. ..... ..#..",
};

const UNKNOWN = "##### #...# #...# #...# #...# #...# #####";

const GLYPHS = new Map<string, number[]>();
for (const [ch, rowsText] of Object.entries(GLYPH_SOURCE)) {
  GLYPHS.set(ch, rowsText.split(" ").map(rowBits));
}
const UNKNOWN_GLYPH = UNKNOWN.split(" ").map(rowBits);

function rowBits(row: string): number {
  let bits = 0;
  for (let i = 0; i < 5; i++) {
    if (row[i] === "#") bits |= 1 << (4 - i);
  }
  return bits;
}

export const FONT_W = 6; // 5 px glyph + 1 px gap
export const FONT_H = 8;

export class Canvas {
  readonly width: number;
  readonly height: number;
  readonly data: Uint8Array;

  constructor(width: number, height: number, background: RGB = WHITE) {
    if (width <= 0 || height <= 0) {
      throw new Error(`bad canvas size ${width}x${height}`);
    }
    this.width = width;
    this.height = height;
    this.data = new Uint8Array(width * height * 4);
    for (let i = 0; i < width * height; i++) {
      this.data[4 * i] = background[0];
      this.data[4 * i + 1] = background[1];
      this.data[4 * i + 2] = background[2];
      this.data[4 * i + 3] = 255;
    }
  }

  set(x: number, y: number, c: RGB): void {
    x = Math.round(x);
    y = Math.round(y);
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const i = 4 * (y * this.width + x);
    this.data[i] = c[0];
    this.data[i + 1] = c[1];
    this.data[i + 2] = c[2];
    this.data[i + 3] = 255;
  }

  get(x: number, y: number): RGB {
    const i = 4 * (y * this.width + x);
    return [this.data[i], this.data[i + 1], this.data[i + 2]];
  }

  fillRect(x: number, y: number, w: number, h: number, c: RGB): void {
    const x0 = Math.max(0, Math.round(x));
    const y0 = Math.max(0, Math.round(y));
    const x1 = Math.min(this.width, Math.round(x + w));
    const y1 = Math.min(this.height, Math.round(y + h));
    for (let yy = y0; yy < y1; yy++) {
      for (let xx = x0; xx < x1; xx++) this.set(xx, yy, c);
    }
  }

  /** Bresenham segment; dash = [on, off] in pixels, phase carried by caller. */
  line(x0: number, y0: number, x1: number, y1: number, c: RGB,
       dash?: readonly [number, number], phase = 0): number {
    let x = Math.round(x0), y = Math.round(y0);
    const xe = Math.round(x1), ye = Math.round(y1);
    const dx = Math.abs(xe - x), sx = x < xe ? 1 : -1;
    const dy = -Math.abs(ye - y), sy = y < ye ? 1 : -1;
    let err = dx + dy;
    let walked = phase;
    for (;;) {
      if (!dash || walked % (dash[0] + dash[1]) < dash[0]) this.set(x, y, c);
      if (x === xe && y === ye) break;
      const e2 = 2 * err;
      if (e2 >= dy) { err += dy; x += sx; }
      if (e2 <= dx) { err += dx; y += sy; }
      walked++;
    }
    return walked;
  }

  polyline(xs: number[], ys: number[], c: RGB,
           dash?: readonly [number, number]): void {
    let phase = 0;
    for (let i = 1; i < xs.length; i++) {
      if (!isFinite(xs[i - 1]) || !isFinite(ys[i - 1]) ||
          !isFinite(xs[i]) || !isFinite(ys[i])) continue;
      phase = this.line(xs[i - 1], ys[i - 1], xs[i], ys[i], c, dash, phase);
    }
  }

  /** Filled upward-pointing triangle centered on (cx, cy). */
  triangle(cx: number, cy: number, size: number, c: RGB): void {
    for (let row = 0; row <= size; row++) {
      const half = (row / size) * size * 0.7;
      const y = Math.round(cy - size / 2 + row);
      for (let x = Math.round(cx - half); x <= Math.round(cx + half); x++) {
        this.set(x, y, c);
      }
    }
  }

  square(cx: number, cy: number, size: number, c: RGB): void {
    this.fillRect(cx - size / 2, cy - size / 2, size, size, c);
  }

  /** Draw text with its top-left corner at (x, y); returns pixel width. */
  text(x: number, y: number, s: string, c: RGB = BLACK, scale = 1): number {
    let cx = Math.round(x);
    for (const raw of s) {
      const glyph = GLYPHS.get(raw) ?? GLYPHS.get(raw.toLowerCase()) ?? UNKNOWN_GLYPH;
      for (let row = 0; row < 7; row++) {
        for (let col = 0; col < 5; col++) {
          if (glyph[row] & (1 << (4 - col))) {
            for (let sy = 0; sy < scale; sy++) {
              for (let sx = 0; sx < scale; sx++) {
                this.set(cx + col * scale + sx, Math.round(y) + row * scale + sy, c);
              }
            }
          }
        }
      }
      cx += FONT_W * scale;
    }
    return s.length * FONT_W * scale;
  }

  textWidth(s: string, scale = 1): number {
    return s.length * FONT_W * scale;
  }
}
