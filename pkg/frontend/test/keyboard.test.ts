import { describe, expect, it } from 'vitest';

import { actionForKey } from '../src/keyboard.js';

describe('keyboard shortcuts', () => {
  it('maps R and I to labels', () => {
    expect(actionForKey('r')).toEqual({ kind: 'label', label: 'Relevant' });
    expect(actionForKey('R')).toEqual({ kind: 'label', label: 'Relevant' });
    expect(actionForKey('i')).toEqual({ kind: 'label', label: 'Irrelevant' });
  });

  it('maps U to undo-last', () => {
    expect(actionForKey('u')).toEqual({ kind: 'undo' });
  });

  it('ignores other keys', () => {
    expect(actionForKey('x')).toBeNull();
    expect(actionForKey('Enter')).toBeNull();
  });

  it('suspends shortcuts while typing in form fields', () => {
    expect(actionForKey('r', 'INPUT')).toBeNull();
    expect(actionForKey('i', 'textarea')).toBeNull();
    expect(actionForKey('r', 'BUTTON')).toEqual({ kind: 'label', label: 'Relevant' });
  });
});
