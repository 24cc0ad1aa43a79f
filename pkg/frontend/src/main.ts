import { ApiClient } from './api.js';
import { actionForKey } from './keyboard.js';
import { renderAgreement, renderFlowState, renderGuidance, renderThemes } from './render.js';
import { SessionFlow } from './session.js';

function param(name: string, fallback: string): string {
  const url = new URL(window.location.href);
  return url.searchParams.get(name) ?? fallback;
}

const baseUrl = param('api', 'http://127.0.0.1:8340');
const sessionId = param('session', '');
const annotator = param('annotator', '');
const api = new ApiClient(baseUrl);

const taskMount = document.getElementById('task')!;
const sideMount = document.getElementById('side')!;
const themesMount = document.getElementById('themes')!;

async function refreshAgreement(): Promise<void> {
  if (!sessionId) {
    return;
  }
  try {
    const report = await api.agreement(sessionId);
    sideMount.innerHTML = renderAgreement(report) + renderGuidance();
  } catch {
    // solo sessions (or nothing labeled by both yet): guidance only
    sideMount.innerHTML = renderGuidance();
  }
}

async function refreshThemes(): Promise<void> {
  try {
    themesMount.innerHTML = renderThemes(await api.listThemes());
  } catch {
    themesMount.innerHTML = '';
  }
}

function wireThemeButtons(): void {
  themesMount.addEventListener('click', async (event) => {
    const target = event.target as HTMLElement;
    if (target.dataset.action !== 'save-name') {
      return;
    }
    const key = target.dataset.clusterKey!;
    const input = themesMount.querySelector<HTMLInputElement>(
      `input[data-cluster-key="${key}"]`,
    );
    if (!input || !input.value.trim()) {
      return;
    }
    await api.nameTheme(key, input.value.trim());
    await refreshThemes();
  });
}

async function run(): Promise<void> {
  sideMount.innerHTML = renderGuidance();
  wireThemeButtons();
  await refreshThemes();
  if (!sessionId || !annotator) {
    taskMount.innerHTML =
      '<p class="status">Pass ?session=…&annotator=…&api=… in the URL to start labeling.</p>';
    return;
  }
  const flow = new SessionFlow(api, sessionId, annotator);
  flow.onChange((state) => {
    taskMount.innerHTML = renderFlowState(state);
    if (state.kind === 'task' || state.kind === 'done') {
      void refreshAgreement();
    }
  });
  taskMount.addEventListener('click', (event) => {
    const action = (event.target as HTMLElement).dataset.action;
    if (action === 'relevant') {
      void flow.submit('Relevant');
    } else if (action === 'irrelevant') {
      void flow.submit('Irrelevant');
    } else if (action === 'undo') {
      flow.undoLast();
    } else if (action === 'retry') {
      void flow.retry();
    } else if (action === 'resolve') {
      const recordId = (event.target as HTMLElement).dataset.recordId!;
      const label = window.prompt(`Resolution label for ${recordId} (Relevant/Irrelevant)`);
      if (label === 'Relevant' || label === 'Irrelevant') {
        void api.submitResolution(sessionId, recordId, label).then(refreshAgreement);
      }
    }
  });
  document.addEventListener('keydown', (event) => {
    const tag = (event.target as HTMLElement).tagName ?? '';
    const action = actionForKey(event.key, tag);
    if (action === null) {
      return;
    }
    event.preventDefault();
    if (action.kind === 'label') {
      void flow.submit(action.label);
    } else {
      flow.undoLast();
    }
  });
  await flow.start();
}

void run();
