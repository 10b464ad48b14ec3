// Replays a recorded service transcript as a fetch implementation. Each
// created session serves the recorded turns in order, so branch-replays see
// exactly what the live service returned.

import transcript from './fixtures/transcript.json';

type Transcript = typeof transcript;

interface FakeSession {
  cursor: number;
}

export interface RequestLogEntry {
  method: string;
  url: string;
  body: unknown;
}

export function makeFakeFetch(doc: Transcript = transcript) {
  const sessions = new Map<string, FakeSession>();
  let counter = 0;
  const log: RequestLogEntry[] = [];

  function json(status: number, body: unknown): Response {
    return new Response(JSON.stringify(body), {
      status,
      headers: { 'Content-Type': 'application/json' },
    });
  }

  async function fakeFetch(input: RequestInfo | URL, init?: RequestInit): Promise<Response> {
    const url = String(input);
    const method = (init?.method ?? 'GET').toUpperCase();
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    log.push({ method, url, body });

    if (method === 'POST' && url.endsWith('/sessions')) {
      counter += 1;
      const id = `fake-${counter}`;
      sessions.set(id, { cursor: 0 });
      return json(200, { ...doc.create, session_id: id });
    }
    const askMatch = url.match(/\/sessions\/([^/]+)\/ask$/);
    if (method === 'POST' && askMatch) {
      const session = sessions.get(askMatch[1]);
      if (!session) return json(404, { code: 'unknown_session', message: askMatch[1] });
      const turn = doc.turns[session.cursor];
      if (!turn || turn.question !== body.question) {
        return json(400, {
          code: 'unexpected_question',
          message: `recorded ${turn?.question ?? '<none>'}, got ${body.question}`,
        });
      }
      session.cursor += 1;
      return json(200, turn.ask);
    }
    const ctxMatch = url.match(/\/sessions\/([^/]+)\/context$/);
    if (method === 'GET' && ctxMatch) {
      const session = sessions.get(ctxMatch[1]);
      if (!session) return json(404, { code: 'unknown_session', message: ctxMatch[1] });
      const turn = doc.turns[session.cursor - 1];
      if (!turn) return json(400, { code: 'no_turns', message: 'context before first ask' });
      return json(200, turn.context);
    }
    const delMatch = url.match(/\/sessions\/([^/]+)$/);
    if (method === 'DELETE' && delMatch) {
      sessions.delete(delMatch[1]);
      return json(200, { deleted: delMatch[1] });
    }
    return json(404, { code: 'unknown_route', message: url });
  }

  return { fakeFetch, log, sessions };
}

export { transcript };
