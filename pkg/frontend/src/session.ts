import { ApiClient, ApiError } from './api.js';
import type { LabelTaskView, RelevanceLabel } from './types.js';

export type FlowState =
  | { kind: 'idle' }
  | { kind: 'loading' }
  | { kind: 'task'; task: LabelTaskView }
  | { kind: 'submitting'; task: LabelTaskView }
  | { kind: 'done' }
  | { kind: 'error'; message: string; retained: LabelTaskView | null };

/** Labeling task queue for one annotator in one session.
 *
 * No optimistic updates: the view advances only after the server stores a
 * label (201). A failed or offline submission keeps the current task so
 * nothing is lost. Undo re-opens the previously submitted record; the
 * server's latest-wins rule makes resubmission supersede.
 */
export class SessionFlow {
  private current: FlowState = { kind: 'idle' };
  private lastSubmitted: LabelTaskView | null = null;
  private listeners: ((state: FlowState) => void)[] = [];

  constructor(
    private readonly api: ApiClient,
    readonly sessionId: string,
    readonly annotator: string,
  ) {}

  get state(): FlowState {
    return this.current;
  }

  onChange(listener: (state: FlowState) => void): void {
    this.listeners.push(listener);
  }

  private transition(state: FlowState): void {
    this.current = state;
    for (const listener of this.listeners) {
      listener(state);
    }
  }

  async start(): Promise<void> {
    this.transition({ kind: 'loading' });
    await this.advance();
  }

  private async advance(): Promise<void> {
    try {
      const task = await this.api.nextTask(this.sessionId, this.annotator);
      this.transition(task === null ? { kind: 'done' } : { kind: 'task', task });
    } catch (err) {
      this.transition({
        kind: 'error',
        message: err instanceof ApiError ? err.message : String(err),
        retained: null,
      });
    }
  }

  /** Submit a label for the displayed task. No-op unless a task is shown
   * (in-flight submissions ignore further clicks). */
  async submit(label: RelevanceLabel): Promise<void> {
    if (this.current.kind !== 'task') {
      return;
    }
    const task = this.current.task;
    this.transition({ kind: 'submitting', task });
    try {
      await this.api.submitLabel(this.sessionId, task.record_id, this.annotator, label);
    } catch (err) {
      this.transition({
        kind: 'error',
        message: err instanceof ApiError ? err.message : String(err),
        retained: task,
      });
      return;
    }
    this.lastSubmitted = task;
    await this.advance();
  }

  /** Re-open the last submitted record so it can be re-labeled. */
  undoLast(): boolean {
    if (this.lastSubmitted === null) {
      return false;
    }
    if (this.current.kind === 'submitting' || this.current.kind === 'loading') {
      return false;
    }
    this.transition({ kind: 'task', task: this.lastSubmitted });
    this.lastSubmitted = null;
    return true;
  }

  /** Return from an error state to the retained task, or refetch. */
  async retry(): Promise<void> {
    if (this.current.kind !== 'error') {
      return;
    }
    if (this.current.retained !== null) {
      this.transition({ kind: 'task', task: this.current.retained });
    } else {
      await this.start();
    }
  }
}
