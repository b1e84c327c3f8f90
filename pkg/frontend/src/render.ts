/** Scatter geometry and canvas drawing. The geometry half is pure and
 * covered by tests; the canvas half only runs in the browser. */

export interface Transform {
  scale: number;
  tx: number;
  ty: number;
}

export interface Rect {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export const PALETTE = [
  '#4e79a7', '#f28e2b', '#e15759', '#76b7b2', '#59a14f',
  '#edc948', '#b07aa1', '#ff9da7', '#9c755f', '#bab0ac',
  '#1f77b4', '#d62728', '#2ca02c', '#9467bd',
];

const UNLABELED = '#999999';

export function colorFor(label: number | undefined): string {
  if (label === undefined || label < 0) return UNLABELED;
  return PALETTE[label % PALETTE.length];
}

export function toScreen(t: Transform, x: number, y: number): [number, number] {
  return [x * t.scale + t.tx, y * t.scale + t.ty];
}

export function toWorld(t: Transform, sx: number, sy: number): [number, number] {
  return [(sx - t.tx) / t.scale, (sy - t.ty) / t.scale];
}

/** Fit the coordinate bounding box into width x height with a margin. */
export function fitTransform(
  coords: number[][], width: number, height: number, margin = 40,
): Transform {
  if (coords.length === 0) return { scale: 1, tx: width / 2, ty: height / 2 };
  let xMin = Infinity, xMax = -Infinity, yMin = Infinity, yMax = -Infinity;
  for (const [x, y] of coords) {
    if (x < xMin) xMin = x;
    if (x > xMax) xMax = x;
    if (y < yMin) yMin = y;
    if (y > yMax) yMax = y;
  }
  const spanX = Math.max(xMax - xMin, 1e-12);
  const spanY = Math.max(yMax - yMin, 1e-12);
  const scale = Math.min((width - 2 * margin) / spanX, (height - 2 * margin) / spanY);
  // center the data, not just the margin box
  const tx = width / 2 - scale * (xMin + xMax) / 2;
  const ty = height / 2 - scale * (yMin + yMax) / 2;
  return { scale, tx, ty };
}

/** Rescale about a fixed screen point, so the point under the cursor stays put. */
export function zoomAt(t: Transform, sx: number, sy: number, factor: number): Transform {
  const scale = t.scale * factor;
  return {
    scale,
    tx: sx - (sx - t.tx) * factor,
    ty: sy - (sy - t.ty) * factor,
  };
}

export function panBy(t: Transform, dx: number, dy: number): Transform {
  return { scale: t.scale, tx: t.tx + dx, ty: t.ty + dy };
}

/** Corner-order-free rectangle from a drag gesture. */
export function normalizeRect(ax: number, ay: number, bx: number, by: number): Rect {
  return {
    x0: Math.min(ax, bx),
    y0: Math.min(ay, by),
    x1: Math.max(ax, bx),
    y1: Math.max(ay, by),
  };
}

export function idsInRect(
  ids: string[], coords: number[][], t: Transform, rect: Rect,
): string[] {
  const hit: string[] = [];
  for (let i = 0; i < ids.length; i++) {
    const [sx, sy] = toScreen(t, coords[i][0], coords[i][1]);
    if (sx >= rect.x0 && sx <= rect.x1 && sy >= rect.y0 && sy <= rect.y1) {
      hit.push(ids[i]);
    }
  }
  return hit;
}

/** Nearest mark within `radius` screen pixels, or null. */
export function nearestWithin(
  ids: string[], coords: number[][], t: Transform,
  sx: number, sy: number, radius: number,
): string | null {
  let best: string | null = null;
  let bestSq = radius * radius;
  for (let i = 0; i < ids.length; i++) {
    const [px, py] = toScreen(t, coords[i][0], coords[i][1]);
    const d = (px - sx) * (px - sx) + (py - sy) * (py - sy);
    if (d <= bestSq) {
      bestSq = d;
      best = ids[i];
    }
  }
  return best;
}

/** Per-index interpolation between two coordinate sets of equal length. */
export function lerpCoords(from: number[][], to: number[][], alpha: number): number[][] {
  const out: number[][] = new Array(from.length);
  for (let i = 0; i < from.length; i++) {
    out[i] = [
      from[i][0] + (to[i][0] - from[i][0]) * alpha,
      from[i][1] + (to[i][1] - from[i][1]) * alpha,
    ];
  }
  return out;
}

export interface Frame {
  ids: string[];
  coords: number[][];
  labels?: number[];
  transform: Transform;
  referenceId: string | null;
  boxSelection: Set<string>;
  markedSame: Set<string>;
  dragRect: Rect | null;
}

const MARK_RADIUS = 3.5;

/** Draws one frame. Every object gets a mark; no culling, no sampling. */
export class CanvasScatter {
  private ctx: CanvasRenderingContext2D;

  constructor(private canvas: HTMLCanvasElement) {
    const ctx = canvas.getContext('2d');
    if (!ctx) throw new Error('2d canvas context unavailable');
    this.ctx = ctx;
  }

  draw(frame: Frame): void {
    const { ctx } = this;
    const w = this.canvas.width;
    const h = this.canvas.height;
    ctx.clearRect(0, 0, w, h);

    for (let i = 0; i < frame.ids.length; i++) {
      const id = frame.ids[i];
      const [sx, sy] = toScreen(frame.transform, frame.coords[i][0], frame.coords[i][1]);
      ctx.beginPath();
      ctx.arc(sx, sy, MARK_RADIUS, 0, 2 * Math.PI);
      ctx.fillStyle = colorFor(frame.labels?.[i]);
      ctx.globalAlpha = frame.boxSelection.size > 0 && !frame.boxSelection.has(id)
        && id !== frame.referenceId ? 0.35 : 1.0;
      ctx.fill();
      ctx.globalAlpha = 1.0;

      if (frame.markedSame.has(id)) {
        ctx.beginPath();
        ctx.arc(sx, sy, MARK_RADIUS + 3, 0, 2 * Math.PI);
        ctx.strokeStyle = '#111111';
        ctx.lineWidth = 2;
        ctx.stroke();
      }
      if (id === frame.referenceId) {
        ctx.beginPath();
        ctx.arc(sx, sy, MARK_RADIUS + 5, 0, 2 * Math.PI);
        ctx.strokeStyle = '#d62728';
        ctx.lineWidth = 2.5;
        ctx.stroke();
      }
    }

    if (frame.dragRect) {
      const r = frame.dragRect;
      ctx.strokeStyle = '#888888';
      ctx.setLineDash([6, 4]);
      ctx.lineWidth = 1.5;
      ctx.strokeRect(r.x0, r.y0, r.x1 - r.x0, r.y1 - r.y0);
      ctx.setLineDash([]);
    }
  }
}
