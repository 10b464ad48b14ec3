// Hyperparameter controls. Values are staged and sent with the NEXT ask only,
// so a running conversation can be steered turn by turn.

import { AskOverrides } from './api.js';

export interface ControlSpec {
  key: keyof AskOverrides;
  label: string;
  min: number;
  max: number;
  step: number;
  initial: number;
}

export const CONTROL_SPECS: ControlSpec[] = [
  { key: 'r', label: 'frontiers (r)', min: 1, max: 10, step: 1, initial: 3 },
  { key: 'hf1', label: 'frontier match weight', min: 0, max: 1, step: 0.05, initial: 0.55 },
  { key: 'hf2', label: 'frontier proximity weight', min: 0, max: 1, step: 0.05, initial: 0.35 },
  { key: 'hf3', label: 'frontier prior weight', min: 0, max: 1, step: 0.05, initial: 0.1 },
  { key: 'ha1', label: 'answer frontier weight', min: 0, max: 1, step: 0.05, initial: 0.85 },
];

export function collectOverrides(
  values: Partial<Record<keyof AskOverrides, number>>,
  touched: Set<keyof AskOverrides>,
): AskOverrides {
  const out: AskOverrides = {};
  // the three frontier weights must travel together so the service can
  // re-validate their sum
  const frontierTouched = ['hf1', 'hf2', 'hf3'].some((k) =>
    touched.has(k as keyof AskOverrides),
  );
  for (const spec of CONTROL_SPECS) {
    const value = values[spec.key];
    if (value === undefined) continue;
    const send =
      touched.has(spec.key) ||
      (frontierTouched && ['hf1', 'hf2', 'hf3'].includes(spec.key));
    if (send) {
      out[spec.key] = spec.key === 'r' ? Math.round(value) : value;
    }
  }
  return out;
}

export function buildControls(
  doc: Document,
  container: HTMLElement,
  onChange: (overrides: AskOverrides) => void,
): void {
  const values: Partial<Record<keyof AskOverrides, number>> = {};
  const touched = new Set<keyof AskOverrides>();
  for (const spec of CONTROL_SPECS) {
    values[spec.key] = spec.initial;
    const row = doc.createElement('label');
    row.className = 'control-row';
    const name = doc.createElement('span');
    name.textContent = spec.label;
    const input = doc.createElement('input');
    input.type = 'range';
    input.min = String(spec.min);
    input.max = String(spec.max);
    input.step = String(spec.step);
    input.value = String(spec.initial);
    input.dataset.key = spec.key;
    const readout = doc.createElement('output');
    readout.textContent = String(spec.initial);
    input.addEventListener('input', () => {
      values[spec.key] = Number(input.value);
      touched.add(spec.key);
      readout.textContent = input.value;
      onChange(collectOverrides(values, touched));
    });
    row.appendChild(name);
    row.appendChild(input);
    row.appendChild(readout);
    container.appendChild(row);
  }
  const note = doc.createElement('p');
  note.className = 'control-note';
  note.textContent = 'changes apply to the next question';
  container.appendChild(note);
}
