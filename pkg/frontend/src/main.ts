import { api, pollWhileEmbedding, ApiError, SessionState } from './api.js';
import { ViewState, constraintMessage } from './state.js';
import {
  CanvasScatter, Frame, Rect,
  fitTransform, idsInRect, nearestWithin, normalizeRect, panBy, zoomAt, lerpCoords,
} from './render.js';

const ANIM_MS = 500;
const CLICK_SLOP_PX = 4;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

const canvas = el<HTMLCanvasElement>('plot');
const statusEl = el<HTMLElement>('status');
const countEl = el<HTMLElement>('count');
const messageEl = el<HTMLElement>('message');
const errorEl = el<HTMLElement>('error');
const submitBtn = el<HTMLButtonElement>('submit');
const reembedBtn = el<HTMLButtonElement>('reembed');
const clearBtn = el<HTMLButtonElement>('clear');

const view = new ViewState();
const scatter = new CanvasScatter(canvas);

let sid = '';
let ids: string[] = [];
let coords: number[][] = [];
let labels: number[] | undefined;
let tripletCount = 0;
let dragRect: Rect | null = null;

function draw(shown: number[][] = coords): void {
  const frame: Frame = {
    ids, coords: shown, labels,
    transform: view.transform,
    referenceId: view.referenceId,
    boxSelection: view.boxSelection,
    markedSame: view.markedSame,
    dragRect,
  };
  scatter.draw(frame);
}

function refreshControls(): void {
  submitBtn.disabled = !view.submittable;
  reembedBtn.disabled = view.busy;
  statusEl.textContent = view.busy
    ? `embedding… (serving revision ${view.revision})`
    : `idle, revision ${view.revision}`;
  countEl.textContent = `${tripletCount} constraints collected`;
}

function showError(err: unknown): void {
  if (err instanceof ApiError && err.busy) {
    errorEl.textContent = `${err.message} — wait for the session to go idle and retry`;
  } else {
    errorEl.textContent = err instanceof Error ? err.message : String(err);
  }
}

function applyState(s: SessionState): void {
  ids = s.ids;
  labels = s.labels;
  tripletCount = s.tripletCount;
  view.revision = s.revision;
}

/** Slide marks to their new places; identity is positional, ids are stable. */
function animateTo(next: number[][]): Promise<void> {
  const from = coords;
  coords = next;
  if (from.length !== next.length) {
    draw();
    return Promise.resolve();
  }
  const start = performance.now();
  return new Promise((resolve) => {
    const step = (now: number) => {
      const alpha = Math.min((now - start) / ANIM_MS, 1);
      const eased = 1 - (1 - alpha) * (1 - alpha);
      draw(lerpCoords(from, next, eased));
      if (alpha < 1) requestAnimationFrame(step);
      else resolve();
    };
    requestAnimationFrame(step);
  });
}

// --- pointer interaction: drag pans, shift-drag boxes, click picks ---------

let pointer: { sx: number; sy: number; box: boolean; moved: boolean } | null = null;

canvas.addEventListener('pointerdown', (e) => {
  canvas.setPointerCapture(e.pointerId);
  pointer = { sx: e.offsetX, sy: e.offsetY, box: e.shiftKey, moved: false };
});

canvas.addEventListener('pointermove', (e) => {
  if (!pointer) return;
  const dx = e.offsetX - pointer.sx;
  const dy = e.offsetY - pointer.sy;
  if (Math.abs(dx) + Math.abs(dy) > CLICK_SLOP_PX) pointer.moved = true;
  if (pointer.box) {
    dragRect = normalizeRect(pointer.sx, pointer.sy, e.offsetX, e.offsetY);
  } else if (pointer.moved) {
    view.transform = panBy(view.transform, dx, dy);
    pointer.sx = e.offsetX;
    pointer.sy = e.offsetY;
  }
  draw();
});

canvas.addEventListener('pointerup', (e) => {
  if (!pointer) return;
  if (pointer.box && dragRect) {
    view.setBoxSelection(idsInRect(ids, coords, view.transform, dragRect));
  } else if (!pointer.moved) {
    const hit = nearestWithin(ids, coords, view.transform, e.offsetX, e.offsetY, 8);
    if (hit !== null) {
      if (view.boxSelection.has(hit)) view.toggleMarked(hit);
      else view.setReference(hit);
    }
  }
  pointer = null;
  dragRect = null;
  messageEl.textContent = '';
  draw();
  refreshControls();
});

canvas.addEventListener('wheel', (e) => {
  e.preventDefault();
  const factor = e.deltaY < 0 ? 1.15 : 1 / 1.15;
  view.transform = zoomAt(view.transform, e.offsetX, e.offsetY, factor);
  draw();
}, { passive: false });

// --- buttons ----------------------------------------------------------------

submitBtn.addEventListener('click', async () => {
  if (!view.submittable || view.referenceId === null) return;
  errorEl.textContent = '';
  try {
    const resp = await api.submitSelection(
      sid, view.referenceId, [...view.markedSame], [...view.boxSelection]);
    tripletCount = resp.tripletCount;
    messageEl.textContent = constraintMessage(resp.added);
    view.clearSelection();
    draw();
    refreshControls();
  } catch (err) {
    showError(err);
  }
});

reembedBtn.addEventListener('click', async () => {
  errorEl.textContent = '';
  try {
    const accepted = await api.reembed(sid);
    view.busy = true;
    messageEl.textContent = `re-embedding toward revision ${accepted.revision}`;
    refreshControls();
    const done = await pollWhileEmbedding(sid, (s) => {
      view.revision = s.revision;
      refreshControls();
    });
    view.busy = false;
    applyState(done);
    if (done.status === 'error') {
      showError(new Error(done.error ?? 'embedding failed'));
      draw();
    } else {
      await animateTo(done.coords);
    }
    refreshControls();
  } catch (err) {
    view.busy = false;
    refreshControls();
    showError(err);
  }
});

clearBtn.addEventListener('click', () => {
  view.setReference(null);
  view.clearSelection();
  messageEl.textContent = '';
  draw();
  refreshControls();
});

// --- boot -------------------------------------------------------------------

async function boot(): Promise<void> {
  try {
    const s = await api.createSession();
    sid = s.id ?? '';
    applyState(s);
    coords = s.coords;
    view.transform = fitTransform(coords, canvas.width, canvas.height);
    draw();
    refreshControls();
  } catch (err) {
    showError(err);
  }
}

void boot();
