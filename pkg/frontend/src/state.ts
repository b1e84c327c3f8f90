import type { Transform } from './render.js';

/**
 * Client-side state for one refinement session.
 *
 * Two invariants hold after every operation: the marked-same set is a
 * subset of the box selection, and the reference is never inside the box
 * selection. Mutators repair rather than reject, so callers can wire
 * them straight to pointer events.
 */
export class ViewState {
  transform: Transform = { scale: 1, tx: 0, ty: 0 };
  referenceId: string | null = null;
  boxSelection = new Set<string>();
  markedSame = new Set<string>();
  revision = 0;
  busy = false;

  setReference(id: string | null): void {
    this.referenceId = id;
    if (id !== null && this.boxSelection.has(id)) {
      this.boxSelection.delete(id);
      this.markedSame.delete(id);
    }
  }

  setBoxSelection(ids: Iterable<string>): void {
    this.boxSelection = new Set(ids);
    if (this.referenceId !== null) this.boxSelection.delete(this.referenceId);
    for (const id of [...this.markedSame]) {
      if (!this.boxSelection.has(id)) this.markedSame.delete(id);
    }
  }

  /** No-op for anything outside the current box. */
  toggleMarked(id: string): void {
    if (!this.boxSelection.has(id)) return;
    if (this.markedSame.has(id)) this.markedSame.delete(id);
    else this.markedSame.add(id);
  }

  clearSelection(): void {
    this.boxSelection.clear();
    this.markedSame.clear();
  }

  /** A submission needs a reference, a non-empty box, and an idle session. */
  get submittable(): boolean {
    return !this.busy && this.referenceId !== null && this.boxSelection.size > 0;
  }

  /** Throws if an invariant is broken; used by tests, cheap enough to keep. */
  check(): void {
    for (const id of this.markedSame) {
      if (!this.boxSelection.has(id)) {
        throw new Error(`marked id ${id} is outside the box selection`);
      }
    }
    if (this.referenceId !== null && this.boxSelection.has(this.referenceId)) {
      throw new Error('reference is inside its own box selection');
    }
  }
}

/**
 * The message shown after a submission. The count comes from the service
 * response verbatim; the client never computes constraint arithmetic.
 */
export function constraintMessage(added: number): string {
  if (added === 0) {
    return '0 constraints added (every boxed item is marked, nothing to contrast against)';
  }
  return `${added} constraints added`;
}
