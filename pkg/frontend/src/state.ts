// One active session per tab. Keeps the turn-indexed transcript and supports
// branching a fresh session from any prefix (the engine itself is forward-only,
// so a branch replays turns 0..i against a new session).

import {
  AskOverrides,
  ChatApi,
  ContextSnapshot,
  TurnRecordPayload,
  isFailure,
} from './api.js';

export interface SessionSetup {
  mode: 'oracle' | 'naive';
  q0: string;
  oracleEntities?: string[];
  oracleAnswers?: string[];
}

export interface TurnView {
  record: TurnRecordPayload;
  snapshot: ContextSnapshot | null;
}

export class SessionStore {
  sessionId: string | null = null;
  setup: SessionSetup | null = null;
  turns: TurnView[] = [];
  pendingOverrides: AskOverrides = {};
  lastError: string | null = null;

  constructor(private readonly api: ChatApi) {}

  get active(): boolean {
    return this.sessionId !== null;
  }

  async start(setup: SessionSetup): Promise<TurnView> {
    const created = await this.api.createSession(
      setup.mode,
      setup.q0,
      setup.oracleEntities,
      setup.oracleAnswers,
    );
    this.sessionId = created.session_id;
    this.setup = setup;
    this.turns = [{ record: created.turn0, snapshot: null }];
    this.lastError = null;
    return this.turns[0];
  }

  /** Applies the staged hyperparameter overrides to this single ask. */
  async ask(question: string): Promise<TurnView | null> {
    if (!this.sessionId) throw new Error('no active session');
    const overrides = this.pendingOverrides;
    this.pendingOverrides = {};
    const payload = await this.api.ask(this.sessionId, question, overrides);
    if (isFailure(payload)) {
      this.lastError = payload.message;
      return null;
    }
    const snapshot = await this.api.context(this.sessionId);
    const view: TurnView = { record: payload, snapshot };
    this.turns.push(view);
    this.lastError = null;
    return view;
  }

  stageOverrides(overrides: AskOverrides): void {
    this.pendingOverrides = { ...this.pendingOverrides, ...overrides };
  }

  /**
   * Starts a new session replaying turns 0..prefixLength of the current
   * transcript, then continues from there.
   */
  async branchFrom(prefixLength: number): Promise<void> {
    if (!this.setup) throw new Error('no session to branch from');
    const replay = this.turns
      .slice(1, prefixLength + 1)
      .map((t) => t.record.question);
    const setup = this.setup;
    await this.start(setup);
    for (const question of replay) {
      await this.ask(question);
    }
  }

  async reset(): Promise<void> {
    if (this.sessionId) {
      await this.api.deleteSession(this.sessionId);
    }
    this.sessionId = null;
    this.setup = null;
    this.turns = [];
    this.pendingOverrides = {};
    this.lastError = null;
  }
}
