// Typed client for the kgchat session service. The UI consumes only these
// documented endpoints and renders exactly what they return.

export interface AnswerEntry {
  node: number;
  label: string;
  external_id: string | null;
  score: number;
  rank: number;
  frontier_term: number;
  context_term: number;
}

export interface AnswerPayload {
  top_group: { node: number; label: string; external_id: string | null }[];
  entries: AnswerEntry[];
}

export interface FrontierPayload {
  node: number;
  label: string;
  match: number;
  proximity: number;
  prior: number;
  combined: number;
}

export interface TurnRecordPayload {
  turn: number;
  question: string;
  frontiers: FrontierPayload[];
  answers: AnswerPayload;
  elapsed_ms: number;
}

export interface TurnFailurePayload {
  turn_failed: true;
  message: string;
  turn: number;
}

export interface SnapshotNode {
  id: number;
  kind: 'entity' | 'predicate' | 'class' | 'literal';
  label: string;
  external_id: string | null;
  qa_roles: { role: 'question' | 'answer'; turn: number }[];
  frontier: boolean;
}

export interface SnapshotFact {
  id: number;
  subject: number;
  predicate: number;
  object: number;
  qualifiers: [number, number][];
}

export interface ContextSnapshot {
  turn: number;
  node_count: number;
  fact_count: number;
  exported_nodes: number;
  node_cap: number;
  nodes: SnapshotNode[];
  facts: SnapshotFact[];
  frontiers: {
    node: number;
    label: string;
    match: number;
    proximity: number;
    prior: number;
    combined: number;
  }[];
}

export interface CreateSessionResponse {
  session_id: string;
  turn0: TurnRecordPayload;
}

export interface AskOverrides {
  r?: number;
  hf1?: number;
  hf2?: number;
  hf3?: number;
  ha1?: number;
}

export interface ServiceError {
  code: string;
  message: string;
}

async function parse<T>(response: Response): Promise<T> {
  const body = await response.json();
  if (!response.ok) {
    const err = body as ServiceError;
    throw new Error(`${err.code ?? response.status}: ${err.message ?? 'request failed'}`);
  }
  return body as T;
}

export class ChatApi {
  constructor(private readonly base: string = '') {}

  async createSession(
    mode: 'oracle' | 'naive',
    q0: string,
    oracleEntities?: string[],
    oracleAnswers?: string[],
  ): Promise<CreateSessionResponse> {
    const response = await fetch(`${this.base}/sessions`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({
        mode,
        q0,
        oracle_entities: oracleEntities,
        oracle_answers: oracleAnswers,
      }),
    });
    return parse<CreateSessionResponse>(response);
  }

  async ask(
    sessionId: string,
    question: string,
    overrides: AskOverrides = {},
  ): Promise<TurnRecordPayload | TurnFailurePayload> {
    const response = await fetch(`${this.base}/sessions/${sessionId}/ask`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ question, ...overrides }),
    });
    return parse<TurnRecordPayload | TurnFailurePayload>(response);
  }

  async context(sessionId: string): Promise<ContextSnapshot> {
    const response = await fetch(`${this.base}/sessions/${sessionId}/context`);
    return parse<ContextSnapshot>(response);
  }

  async deleteSession(sessionId: string): Promise<void> {
    await fetch(`${this.base}/sessions/${sessionId}`, { method: 'DELETE' });
  }
}

export function isFailure(
  payload: TurnRecordPayload | TurnFailurePayload,
): payload is TurnFailurePayload {
  return (payload as TurnFailurePayload).turn_failed === true;
}
