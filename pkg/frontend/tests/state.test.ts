import { describe, expect, it } from 'vitest';

import { ViewState, constraintMessage } from '../src/state.js';

describe('ViewState invariants', () => {
  it('marked-same stays inside the box selection', () => {
    const v = new ViewState();
    v.setBoxSelection(['a', 'b', 'c']);
    v.toggleMarked('a');
    v.toggleMarked('b');
    v.setBoxSelection(['b', 'd']); // 'a' leaves the box, its mark must go too
    expect([...v.markedSame]).toEqual(['b']);
    v.check();
  });

  it('toggling outside the box is a no-op', () => {
    const v = new ViewState();
    v.setBoxSelection(['a']);
    v.toggleMarked('z');
    expect(v.markedSame.size).toBe(0);
  });

  it('toggle twice unmarks', () => {
    const v = new ViewState();
    v.setBoxSelection(['a']);
    v.toggleMarked('a');
    v.toggleMarked('a');
    expect(v.markedSame.size).toBe(0);
  });

  it('boxing the reference drops it from the box', () => {
    const v = new ViewState();
    v.setReference('r');
    v.setBoxSelection(['r', 'a', 'b']);
    expect(v.boxSelection.has('r')).toBe(false);
    expect(v.boxSelection.size).toBe(2);
    v.check();
  });

  it('referencing a boxed point pulls it out of the box and the marks', () => {
    const v = new ViewState();
    v.setBoxSelection(['a', 'b']);
    v.toggleMarked('a');
    v.setReference('a');
    expect(v.boxSelection.has('a')).toBe(false);
    expect(v.markedSame.has('a')).toBe(false);
    v.check();
  });

  it('holds invariants through an arbitrary operation sequence', () => {
    const v = new ViewState();
    const ids = ['a', 'b', 'c', 'd', 'e'];
    let x = 12345;
    const next = () => {
      x = (x * 1103515245 + 12345) % 2147483648;
      return x;
    };
    for (let step = 0; step < 500; step++) {
      const id = ids[next() % ids.length];
      switch (next() % 4) {
        case 0: v.setReference(id); break;
        case 1: v.setBoxSelection(ids.filter(() => next() % 2 === 0)); break;
        case 2: v.toggleMarked(id); break;
        default: v.clearSelection();
      }
      v.check();
    }
  });

  it('gates submission on reference, box, and idleness', () => {
    const v = new ViewState();
    expect(v.submittable).toBe(false);
    v.setReference('r');
    expect(v.submittable).toBe(false);
    v.setBoxSelection(['a']);
    expect(v.submittable).toBe(true);
    v.busy = true;
    expect(v.submittable).toBe(false);
  });
});

describe('constraintMessage', () => {
  it('shows the count it was given', () => {
    expect(constraintMessage(32)).toBe('32 constraints added');
  });

  it('explains an empty expansion', () => {
    expect(constraintMessage(0)).toMatch(/^0 constraints added \(/);
  });
});
