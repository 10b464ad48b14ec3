// Small force-directed layout for the context snapshot. Pure math so the
// graph view can be tested without a canvas.

import { ContextSnapshot } from './api.js';

export interface LayoutNode {
  id: number;
  x: number;
  y: number;
  vx: number;
  vy: number;
}

export interface LayoutEdge {
  source: number;
  target: number;
}

export function snapshotEdges(snapshot: ContextSnapshot): LayoutEdge[] {
  const present = new Set(snapshot.nodes.map((n) => n.id));
  const edges: LayoutEdge[] = [];
  for (const fact of snapshot.facts) {
    const pairs: [number, number][] = [
      [fact.subject, fact.predicate],
      [fact.predicate, fact.object],
    ];
    for (const [qp, qv] of fact.qualifiers) {
      pairs.push([fact.predicate, qp]);
      pairs.push([qp, qv]);
    }
    for (const [a, b] of pairs) {
      if (present.has(a) && present.has(b)) {
        edges.push({ source: a, target: b });
      }
    }
  }
  return edges;
}

export class ForceLayout {
  readonly nodes: LayoutNode[] = [];
  readonly edges: LayoutEdge[] = [];
  private index = new Map<number, LayoutNode>();

  constructor(
    private width: number,
    private height: number,
    private readonly springLength = 60,
    private readonly repulsion = 1800,
  ) {}

  /** Keeps positions of surviving nodes so the view stays stable across turns. */
  update(snapshot: ContextSnapshot): void {
    const keep = new Set(snapshot.nodes.map((n) => n.id));
    for (let i = this.nodes.length - 1; i >= 0; i--) {
      if (!keep.has(this.nodes[i].id)) {
        this.index.delete(this.nodes[i].id);
        this.nodes.splice(i, 1);
      }
    }
    let added = 0;
    for (const node of snapshot.nodes) {
      if (!this.index.has(node.id)) {
        const angle = (added + this.nodes.length) * 2.399963; // golden angle
        const radius = 40 + 8 * Math.sqrt(added + this.nodes.length);
        const entry: LayoutNode = {
          id: node.id,
          x: this.width / 2 + radius * Math.cos(angle),
          y: this.height / 2 + radius * Math.sin(angle),
          vx: 0,
          vy: 0,
        };
        this.nodes.push(entry);
        this.index.set(node.id, entry);
        added += 1;
      }
    }
    this.edges.length = 0;
    this.edges.push(...snapshotEdges(snapshot));
  }

  resize(width: number, height: number): void {
    this.width = width;
    this.height = height;
  }

  tick(steps = 1): void {
    for (let s = 0; s < steps; s++) {
      for (const a of this.nodes) {
        for (const b of this.nodes) {
          if (a.id >= b.id) continue;
          let dx = b.x - a.x;
          let dy = b.y - a.y;
          const distSq = Math.max(dx * dx + dy * dy, 1);
          const force = this.repulsion / distSq;
          const dist = Math.sqrt(distSq);
          dx /= dist;
          dy /= dist;
          a.vx -= force * dx;
          a.vy -= force * dy;
          b.vx += force * dx;
          b.vy += force * dy;
        }
      }
      for (const edge of this.edges) {
        const a = this.index.get(edge.source);
        const b = this.index.get(edge.target);
        if (!a || !b) continue;
        const dx = b.x - a.x;
        const dy = b.y - a.y;
        const dist = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
        const stretch = (dist - this.springLength) * 0.02;
        a.vx += (dx / dist) * stretch;
        a.vy += (dy / dist) * stretch;
        b.vx -= (dx / dist) * stretch;
        b.vy -= (dy / dist) * stretch;
      }
      const cx = this.width / 2;
      const cy = this.height / 2;
      for (const node of this.nodes) {
        node.vx += (cx - node.x) * 0.002;
        node.vy += (cy - node.y) * 0.002;
        node.vx *= 0.85;
        node.vy *= 0.85;
        node.x += node.vx;
        node.y += node.vy;
        node.x = Math.min(this.width - 10, Math.max(10, node.x));
        node.y = Math.min(this.height - 10, Math.max(10, node.y));
      }
    }
  }

  position(id: number): LayoutNode | undefined {
    return this.index.get(id);
  }

  nearest(x: number, y: number, radius = 12): LayoutNode | null {
    let best: LayoutNode | null = null;
    let bestDist = radius * radius;
    for (const node of this.nodes) {
      const dx = node.x - x;
      const dy = node.y - y;
      const d = dx * dx + dy * dy;
      if (d < bestDist) {
        best = node;
        bestDist = d;
      }
    }
    return best;
  }
}
