import { ChatApi } from './api.js';
import { renderError, renderTurn } from './chat.js';
import { buildControls } from './controls.js';
import { GraphView } from './graphview.js';
import { SessionStore } from './state.js';

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const api = new ChatApi('');
const store = new SessionStore(api);
const transcript = el<HTMLDivElement>('transcript');
const statusLine = el<HTMLDivElement>('graph-status');
const canvas = el<HTMLCanvasElement>('graph');
const view = new GraphView(canvas, statusLine);

function appendTurnView(record: Parameters<typeof renderTurn>[1]): void {
  transcript.appendChild(renderTurn(document, record, onBranch));
  transcript.scrollTop = transcript.scrollHeight;
}

async function onBranch(turn: number): Promise<void> {
  transcript.textContent = '';
  await store.branchFrom(turn);
  for (const t of store.turns) {
    appendTurnView(t.record);
  }
  const last = store.turns[store.turns.length - 1];
  if (last.snapshot) view.setSnapshot(last.snapshot);
}

async function startSession(): Promise<void> {
  const mode = (el<HTMLSelectElement>('mode')).value as 'oracle' | 'naive';
  const q0 = el<HTMLInputElement>('q0').value.trim();
  if (!q0) return;
  const entities = el<HTMLInputElement>('oracle-entities').value
    .split(',')
    .map((s) => s.trim())
    .filter(Boolean);
  const answers = el<HTMLInputElement>('oracle-answers').value
    .split(',')
    .map((s) => s.trim())
    .filter(Boolean);
  transcript.textContent = '';
  try {
    const turn0 = await store.start({
      mode,
      q0,
      oracleEntities: mode === 'oracle' ? entities : undefined,
      oracleAnswers: mode === 'oracle' ? answers : undefined,
    });
    appendTurnView(turn0.record);
    el<HTMLInputElement>('question').focus();
  } catch (err) {
    transcript.appendChild(renderError(document, String(err)));
  }
}

async function askQuestion(): Promise<void> {
  const input = el<HTMLInputElement>('question');
  const question = input.value.trim();
  if (!question || !store.active) return;
  input.value = '';
  try {
    const turn = await store.ask(question);
    if (turn === null) {
      transcript.appendChild(renderError(document, store.lastError ?? 'unknown'));
      return;
    }
    appendTurnView(turn.record);
    if (turn.snapshot) view.setSnapshot(turn.snapshot);
  } catch (err) {
    transcript.appendChild(renderError(document, String(err)));
  }
}

el<HTMLButtonElement>('start').addEventListener('click', () => void startSession());
el<HTMLButtonElement>('send').addEventListener('click', () => void askQuestion());
el<HTMLInputElement>('question').addEventListener('keydown', (ev) => {
  if (ev.key === 'Enter') void askQuestion();
});
el<HTMLSelectElement>('mode').addEventListener('change', () => {
  const oracle = el<HTMLSelectElement>('mode').value === 'oracle';
  el<HTMLDivElement>('oracle-fields').style.display = oracle ? '' : 'none';
});

buildControls(document, el<HTMLDivElement>('controls'), (overrides) =>
  store.stageOverrides(overrides),
);
