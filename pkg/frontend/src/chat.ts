// Chat transcript rendering. Every answer row comes verbatim from the
// service's turn record: rank, score and the two proximity terms. No
// client-side re-ranking.

import { TurnRecordPayload } from './api.js';

export function renderTurn(
  doc: Document,
  record: TurnRecordPayload,
  onBranch?: (turn: number) => void,
): HTMLElement {
  const wrap = doc.createElement('section');
  wrap.className = 'turn';
  wrap.dataset.turn = String(record.turn);

  const header = doc.createElement('header');
  const title = doc.createElement('span');
  title.className = 'turn-question';
  title.textContent = `t${record.turn} · ${record.question}`;
  header.appendChild(title);
  if (onBranch && record.turn > 0) {
    const branch = doc.createElement('button');
    branch.className = 'branch';
    branch.textContent = 'branch here';
    branch.title = 'replay the conversation up to this turn in a fresh session';
    branch.addEventListener('click', () => onBranch(record.turn));
    header.appendChild(branch);
  }
  wrap.appendChild(header);

  if (record.frontiers.length > 0) {
    const frontierLine = doc.createElement('div');
    frontierLine.className = 'frontiers';
    frontierLine.textContent =
      'frontiers: ' + record.frontiers.map((f) => f.label).join(', ');
    wrap.appendChild(frontierLine);
  }

  const list = doc.createElement('ol');
  list.className = 'answers';
  const topGroup = new Set(record.answers.top_group.map((t) => t.node));
  for (const entry of record.answers.entries.slice(0, 5)) {
    const item = doc.createElement('li');
    item.className = topGroup.has(entry.node) ? 'answer top' : 'answer';
    const label = doc.createElement('span');
    label.className = 'answer-label';
    label.textContent = entry.label;
    const detail = doc.createElement('span');
    detail.className = 'answer-detail';
    detail.textContent =
      `score ${entry.score.toFixed(4)} · frontier ${entry.frontier_term.toFixed(4)}` +
      ` · context ${entry.context_term.toFixed(4)}`;
    item.appendChild(label);
    item.appendChild(detail);
    list.appendChild(item);
  }
  wrap.appendChild(list);

  const meta = doc.createElement('footer');
  meta.className = 'turn-meta';
  meta.textContent = `${record.elapsed_ms.toFixed(0)} ms`;
  wrap.appendChild(meta);
  return wrap;
}

export function topAnswerLabels(record: TurnRecordPayload): string[] {
  return record.answers.top_group.map((t) => t.label);
}

export function renderError(doc: Document, message: string): HTMLElement {
  const div = doc.createElement('div');
  div.className = 'turn-error';
  div.textContent = `turn failed: ${message}`;
  return div;
}
