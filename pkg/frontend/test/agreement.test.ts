import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import { renderAgreement } from '../src/render.js';
import { SessionFlow } from '../src/session.js';
import type { RelevanceLabel } from '../src/types.js';
import { FakeServer } from './fake-server.js';

/** The bundled agreement fixture: 50 records whose pair labels form the
 * confusion matrix [[20, 5], [10, 15]], hence kappa 0.4. The CLI's kappa
 * command prints the same numbers for the matching bundled log. */
const CELLS: [RelevanceLabel, RelevanceLabel, number][] = [
  ['Relevant', 'Relevant', 20],
  ['Relevant', 'Irrelevant', 5],
  ['Irrelevant', 'Relevant', 10],
  ['Irrelevant', 'Irrelevant', 15],
];

function fixtureLabels(): { recordIds: string[]; alice: RelevanceLabel[]; bob: RelevanceLabel[] } {
  const recordIds: string[] = [];
  const alice: RelevanceLabel[] = [];
  const bob: RelevanceLabel[] = [];
  let index = 1;
  for (const [a, b, count] of CELLS) {
    for (let i = 0; i < count; i += 1) {
      recordIds.push(`k${String(index).padStart(3, '0')}`);
      alice.push(a);
      bob.push(b);
      index += 1;
    }
  }
  return { recordIds, alice, bob };
}

describe('pair session agreement', () => {
  it('a simulated two-annotator session renders the same kappa the CLI reports', async () => {
    const server = new FakeServer();
    const api = new ApiClient('http://fake', server.fetch);
    const { recordIds, alice, bob } = fixtureLabels();
    const sessionId = await api.createSession('Pair', ['alice', 'bob'], recordIds);

    for (const [annotator, labels] of [
      ['alice', alice],
      ['bob', bob],
    ] as const) {
      const flow = new SessionFlow(api, sessionId, annotator);
      await flow.start();
      let position = 0;
      while (flow.state.kind === 'task') {
        await flow.submit(labels[position]);
        position += 1;
      }
      expect(flow.state.kind).toBe('done');
      expect(position).toBe(50);
    }

    const report = await api.agreement(sessionId);
    expect(Math.abs(report.kappa - 0.4)).toBeLessThan(1e-12);
    expect(report.observed_agreement).toBeCloseTo(0.7, 12);
    expect(report.expected_agreement).toBeCloseTo(0.5, 12);
    expect(report.confusion).toEqual([
      [20, 5],
      [10, 15],
    ]);
    expect(report.disagreements).toHaveLength(15);

    const html = renderAgreement(report);
    expect(html).toContain('<strong>0.40</strong>');
    expect(html).toContain('Disagreements (15)');
    expect(html).toContain('data-record-id="k021"');

    // every label body the UI sent matches the canonical event shape the
    // annotation log stores, byte for byte
    expect(server.storedLabelBodies).toHaveLength(100);
    expect(server.storedLabelBodies[0]).toBe(
      '{"record_id":"k001","annotator":"alice","label":"Relevant"}',
    );
    for (const body of server.storedLabelBodies) {
      const parsed = JSON.parse(body) as Record<string, string>;
      expect(JSON.stringify(parsed)).toBe(body);
      expect(Object.keys(parsed)).toEqual(['record_id', 'annotator', 'label']);
    }
  });

  it('perfect agreement renders 1.00 with an empty disagreement list', async () => {
    const server = new FakeServer();
    const api = new ApiClient('http://fake', server.fetch);
    const sessionId = await api.createSession('Pair', ['alice', 'bob'], ['v1', 'v2']);
    for (const annotator of ['alice', 'bob'] as const) {
      await api.submitLabel(sessionId, 'v1', annotator, 'Relevant');
      await api.submitLabel(sessionId, 'v2', annotator, 'Irrelevant');
    }
    const report = await api.agreement(sessionId);
    const html = renderAgreement(report);
    expect(report.kappa).toBe(1);
    expect(html).toContain('<strong>1.00</strong>');
    expect(html).toContain('No disagreements.');
  });

  it('disagreement rows can post resolutions', async () => {
    const server = new FakeServer();
    const api = new ApiClient('http://fake', server.fetch);
    const sessionId = await api.createSession('Pair', ['alice', 'bob'], ['v1']);
    await api.submitLabel(sessionId, 'v1', 'alice', 'Relevant');
    await api.submitLabel(sessionId, 'v1', 'bob', 'Irrelevant');
    const report = await api.agreement(sessionId);
    expect(report.disagreements).toEqual(['v1']);
    const html = renderAgreement(report);
    expect(html).toContain('data-action="resolve"');
    await api.submitResolution(sessionId, 'v1', 'Irrelevant');
  });

  it('agreement is hidden for solo sessions (server refuses)', async () => {
    const server = new FakeServer();
    const api = new ApiClient('http://fake', server.fetch);
    const sessionId = await api.createSession('Solo', ['carol'], ['v1']);
    await api.submitLabel(sessionId, 'v1', 'carol', 'Relevant');
    const err = await api.agreement(sessionId).catch((e: unknown) => e);
    expect(err).toBeInstanceOf(Error);
  });
});
