import { describe, expect, it } from 'vitest';

import { escapeHtml, renderFlowState, renderGuidance, renderTask, renderThemes } from '../src/render.js';
import type { LabelTaskView, ThemeEntry } from '../src/types.js';

const TASK: LabelTaskView = {
  record_id: 'v7',
  title: 'phone <review>',
  description: 'my thoughts & notes',
  audio_text: 'the battery drains fast',
  visual_lines: [
    [0, 'BIG SALE'],
    [75.25, 'subscribe'],
  ],
  platform: 'TikTok',
  remaining: 3,
};

describe('renderTask', () => {
  it('shows every field of the task view', () => {
    const html = renderTask(TASK);
    expect(html).toContain('data-record-id="v7"');
    expect(html).toContain('badge-tiktok');
    expect(html).toContain('phone &lt;review&gt;');
    expect(html).toContain('my thoughts &amp; notes');
    expect(html).toContain('the battery drains fast');
    expect(html).toContain('BIG SALE');
    expect(html).toContain('1:15.3'); // 75.25 s formatted
    expect(html).toContain('3 left');
  });

  it('escapes hostile text content', () => {
    const hostile = { ...TASK, title: '<script>alert(1)</script>' };
    const html = renderTask(hostile);
    expect(html).not.toContain('<script>');
    expect(html).toContain('&lt;script&gt;');
  });

  it('renders placeholders when a record has no audio or visual text', () => {
    const silent = { ...TASK, audio_text: '', visual_lines: [] as [number, string][] };
    const html = renderTask(silent);
    expect(html).toContain('(no audio text)');
    expect(html).toContain('(no visual text)');
  });
});

describe('renderFlowState', () => {
  it('disables action buttons while a submission is in flight', () => {
    const submitting = renderFlowState({ kind: 'submitting', task: TASK });
    expect(submitting).toContain('<button disabled');
    const active = renderFlowState({ kind: 'task', task: TASK });
    expect(active).not.toContain('<button disabled');
  });

  it('error state keeps the retained note and a retry button', () => {
    const html = renderFlowState({ kind: 'error', message: 'boom', retained: TASK });
    expect(html).toContain('Submission failed: boom');
    expect(html).toContain('retained');
    expect(html).toContain('data-action="retry"');
  });

  it('done state thanks the annotator', () => {
    expect(renderFlowState({ kind: 'done' })).toContain('All assigned records are labeled');
  });
});

describe('guidance panel', () => {
  it('spells out the relevance criteria including the short-video rule', () => {
    const html = renderGuidance();
    expect(html).toContain('bug report');
    expect(html).toContain('feature request');
    expect(html).toContain('single');
    expect(html).toContain('sentence');
  });
});

describe('renderThemes', () => {
  const ENTRY: ThemeEntry = {
    cluster_key: 'notely:0',
    product: 'notely',
    cluster_id: 0,
    size: 4,
    record_ids: ['r1', 'r2', 'r3', 'r4'],
    top_terms: [
      ['battery', 3.2],
      ['crash', 2.1],
    ],
    theme_name: null,
  };

  it('lists clusters with terms, samples, and an explicit save button', () => {
    const html = renderThemes([ENTRY]);
    expect(html).toContain('notely · cluster 0');
    expect(html).toContain('battery');
    expect(html).toContain('r1, r2, r3, r4');
    expect(html).toContain('data-action="save-name"');
    expect(html).toContain('value=""');
  });

  it('shows the stored name in the input once assigned', () => {
    const named = { ...ENTRY, theme_name: 'Bug Report' };
    expect(renderThemes([named])).toContain('value="Bug Report"');
  });

  it('handles the empty state', () => {
    expect(renderThemes([])).toContain('No theme clusters yet');
  });
});

describe('escapeHtml', () => {
  it('escapes all five significant characters', () => {
    expect(escapeHtml(`<a href="x" title='y'>&</a>`)).toBe(
      '&lt;a href=&quot;x&quot; title=&#39;y&#39;&gt;&amp;&lt;/a&gt;',
    );
  });
});
