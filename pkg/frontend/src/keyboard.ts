import type { RelevanceLabel } from './types.js';

export type KeyAction =
  | { kind: 'label'; label: RelevanceLabel }
  | { kind: 'undo' }
  | null;

/** Throughput shortcuts: R = relevant, I = irrelevant, U = undo last.
 * Ignored while typing in an input so theme naming is unaffected. */
export function actionForKey(key: string, targetTag = ''): KeyAction {
  if (targetTag.toLowerCase() === 'input' || targetTag.toLowerCase() === 'textarea') {
    return null;
  }
  switch (key.toLowerCase()) {
    case 'r':
      return { kind: 'label', label: 'Relevant' };
    case 'i':
      return { kind: 'label', label: 'Irrelevant' };
    case 'u':
      return { kind: 'undo' };
    default:
      return null;
  }
}
