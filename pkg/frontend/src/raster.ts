/** Tiny software rasterizer over an RGB byte buffer. */

import { GLYPH_HEIGHT, GLYPH_WIDTH, glyphFor } from "./font.js";

export type Color = readonly [number, number, number];

export class Raster {
  readonly width: number;
  readonly height: number;
  readonly data: Uint8Array; // RGB, row-major

  constructor(width: number, height: number, background: Color = [255, 255, 255]) {
    this.width = width;
    this.height = height;
    this.data = new Uint8Array(width * height * 3);
    this.fillRect(0, 0, width, height, background);
  }

  setPixel(x: number, y: number, color: Color): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const at = (y * this.width + x) * 3;
    this.data[at] = color[0];
    this.data[at + 1] = color[1];
    this.data[at + 2] = color[2];
  }

  getPixel(x: number, y: number): Color {
    const at = (y * this.width + x) * 3;
    return [this.data[at], this.data[at + 1], this.data[at + 2]];
  }

  fillRect(x0: number, y0: number, w: number, h: number, color: Color): void {
    const x1 = Math.min(this.width, x0 + w);
    const y1 = Math.min(this.height, y0 + h);
    for (let y = Math.max(0, y0); y < y1; y++) {
      for (let x = Math.max(0, x0); x < x1; x++) {
        this.setPixel(x, y, color);
      }
    }
  }

  /** Alpha-blend a rectangle onto the existing pixels (alpha in [0, 1]). */
  blendRect(x0: number, y0: number, w: number, h: number, color: Color, alpha: number): void {
    const x1 = Math.min(this.width, x0 + w);
    const y1 = Math.min(this.height, y0 + h);
    for (let y = Math.max(0, y0); y < y1; y++) {
      for (let x = Math.max(0, x0); x < x1; x++) {
        const at = (y * this.width + x) * 3;
        for (let c = 0; c < 3; c++) {
          this.data[at + c] = Math.round(this.data[at + c] * (1 - alpha) + color[c] * alpha);
        }
      }
    }
  }

  line(x0: number, y0: number, x1: number, y1: number, color: Color, thickness = 1): void {
    let dx = Math.abs(x1 - x0);
    let dy = -Math.abs(y1 - y0);
    const sx = x0 < x1 ? 1 : -1;
    const sy = y0 < y1 ? 1 : -1;
    let err = dx + dy;
    let x = x0;
    let y = y0;
    for (;;) {
      if (thickness === 1) {
        this.setPixel(x, y, color);
      } else {
        const off = thickness >> 1;
        this.fillRect(x - off, y - off, thickness, thickness, color);
      }
      if (x === x1 && y === y1) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y += sy;
      }
    }
  }

  text(x: number, y: number, content: string, color: Color, scale = 1): void {
    let cx = x;
    for (const ch of content) {
      const glyph = glyphFor(ch);
      for (let gy = 0; gy < GLYPH_HEIGHT; gy++) {
        for (let gx = 0; gx < GLYPH_WIDTH; gx++) {
          if ((glyph[gy] >> (GLYPH_WIDTH - 1 - gx)) & 1) {
            this.fillRect(cx + gx * scale, y + gy * scale, scale, scale, color);
          }
        }
      }
      cx += (GLYPH_WIDTH + 1) * scale;
    }
  }

  /** Count pixels of an exact color inside a rectangle. */
  countColor(x0: number, y0: number, w: number, h: number, color: Color): number {
    let total = 0;
    for (let y = y0; y < y0 + h; y++) {
      for (let x = x0; x < x0 + w; x++) {
        const [r, g, b] = this.getPixel(x, y);
        if (r === color[0] && g === color[1] && b === color[2]) total++;
      }
    }
    return total;
  }
}
