import { GUIDANCE_POINTS, GUIDANCE_TITLE } from './guidance.js';
import type { AgreementReport, LabelTaskView, ThemeEntry } from './types.js';
import type { FlowState } from './session.js';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;')
    .replace(/'/g, '&#39;');
}

function formatTimestamp(seconds: number): string {
  const minutes = Math.floor(seconds / 60);
  const rest = seconds - minutes * 60;
  return `${minutes}:${rest.toFixed(1).padStart(4, '0')}`;
}

export function renderGuidance(): string {
  const items = GUIDANCE_POINTS.map((p) => `<li>${escapeHtml(p)}</li>`).join('');
  return `<aside class="guidance"><h3>${escapeHtml(GUIDANCE_TITLE)}</h3><ul>${items}</ul></aside>`;
}

export function renderTask(task: LabelTaskView): string {
  const lines = task.visual_lines
    .map(
      ([ts, text]) =>
        `<li><span class="ts">${formatTimestamp(ts)}</span> ${escapeHtml(text)}</li>`,
    )
    .join('');
  const remaining =
    task.remaining !== undefined
      ? `<span class="remaining">${task.remaining} left</span>`
      : '';
  return [
    `<article class="task" data-record-id="${escapeHtml(task.record_id)}">`,
    `<header><span class="badge badge-${escapeHtml(task.platform.toLowerCase())}">` +
      `${escapeHtml(task.platform)}</span>` +
      `<h2>${escapeHtml(task.title)}</h2>${remaining}</header>`,
    `<p class="description">${escapeHtml(task.description)}</p>`,
    `<section class="audio"><h3>Audio transcript</h3>` +
      `<p>${task.audio_text ? escapeHtml(task.audio_text) : '<em>(no audio text)</em>'}</p></section>`,
    `<section class="visual"><h3>On-screen text</h3>` +
      (lines ? `<ul>${lines}</ul>` : '<p><em>(no visual text)</em></p>') +
      `</section>`,
    `<footer class="actions">` +
      `<button data-action="relevant" accesskey="r">Relevant (R)</button>` +
      `<button data-action="irrelevant" accesskey="i">Irrelevant (I)</button>` +
      `<button data-action="undo" accesskey="u">Undo last (U)</button>` +
      `</footer>`,
    `</article>`,
  ].join('\n');
}

export function renderFlowState(state: FlowState): string {
  switch (state.kind) {
    case 'idle':
    case 'loading':
      return '<p class="status">Loading next task…</p>';
    case 'task':
      return renderTask(state.task);
    case 'submitting':
      return renderTask(state.task).replace(/<button /g, '<button disabled ');
    case 'done':
      return '<p class="status done">All assigned records are labeled. Thank you!</p>';
    case 'error': {
      const note = state.retained
        ? 'Your current task is retained; nothing was lost.'
        : 'Could not reach the server.';
      return (
        `<div class="error"><p>Submission failed: ${escapeHtml(state.message)}</p>` +
        `<p>${note}</p><button data-action="retry">Retry</button></div>`
      );
    }
  }
}

export function renderAgreement(report: AgreementReport): string {
  const [[rr, ri], [ir, ii]] = report.confusion;
  const disagreements = report.disagreements
    .map(
      (rid) =>
        `<li>${escapeHtml(rid)} ` +
        `<button data-action="resolve" data-record-id="${escapeHtml(rid)}">resolve…</button></li>`,
    )
    .join('');
  return [
    '<section class="agreement">',
    `<h2>Agreement</h2>`,
    `<p class="kappa">Cohen's kappa: <strong>${report.kappa.toFixed(2)}</strong></p>`,
    `<p>observed ${report.observed_agreement.toFixed(3)}, ` +
      `expected ${report.expected_agreement.toFixed(3)}</p>`,
    '<table class="confusion"><thead><tr><th></th><th>B: Relevant</th><th>B: Irrelevant</th></tr></thead>',
    `<tbody><tr><th>A: Relevant</th><td>${rr}</td><td>${ri}</td></tr>`,
    `<tr><th>A: Irrelevant</th><td>${ir}</td><td>${ii}</td></tr></tbody></table>`,
    report.disagreements.length
      ? `<h3>Disagreements (${report.disagreements.length})</h3><ul class="disagreements">${disagreements}</ul>`
      : '<p class="done">No disagreements.</p>',
    '</section>',
  ].join('\n');
}

export function renderThemes(entries: ThemeEntry[]): string {
  if (entries.length === 0) {
    return '<p class="status">No theme clusters yet; run the cluster stage first.</p>';
  }
  const rows = entries
    .map((entry) => {
      const terms = entry.top_terms
        .map(([term]) => `<span class="term">${escapeHtml(term)}</span>`)
        .join(' ');
      const name = entry.theme_name ? escapeHtml(entry.theme_name) : '';
      return [
        `<div class="theme" data-cluster-key="${escapeHtml(entry.cluster_key)}">`,
        `<h3>${escapeHtml(entry.product)} · cluster ${entry.cluster_id} ` +
          `<small>(${entry.size} videos)</small></h3>`,
        `<p class="terms">${terms}</p>`,
        `<p class="samples">${entry.record_ids.slice(0, 5).map(escapeHtml).join(', ')}</p>`,
        `<label>Theme name <input type="text" value="${name}" ` +
          `data-cluster-key="${escapeHtml(entry.cluster_key)}"></label>`,
        `<button data-action="save-name" data-cluster-key="${escapeHtml(entry.cluster_key)}">Save name</button>`,
        '</div>',
      ].join('\n');
    })
    .join('\n');
  return `<section class="themes"><h2>Theme review</h2>${rows}</section>`;
}
