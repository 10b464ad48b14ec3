// Canvas renderer for the context snapshot: question/answer nodes colored by
// role, current frontiers outlined, hover shows the score breakdown.

import { ContextSnapshot, SnapshotNode } from './api.js';
import { ForceLayout } from './layout.js';

const KIND_FILL: Record<string, string> = {
  entity: '#4d89d0',
  predicate: '#b8b8c4',
  class: '#8d6fc0',
  literal: '#c9a227',
};

export class GraphView {
  private layout: ForceLayout;
  private snapshot: ContextSnapshot | null = null;
  private byId = new Map<number, SnapshotNode>();
  private hover: number | null = null;
  private animating = false;
  private readonly ctx: CanvasRenderingContext2D | null;

  constructor(
    private readonly canvas: HTMLCanvasElement,
    private readonly statusLine: HTMLElement,
  ) {
    this.layout = new ForceLayout(canvas.width, canvas.height);
    let ctx: CanvasRenderingContext2D | null = null;
    try {
      ctx = canvas.getContext('2d'); // headless DOMs have no 2d context
    } catch {
      ctx = null;
    }
    this.ctx = ctx;
    canvas.addEventListener('mousemove', (ev) => this.onMove(ev));
    canvas.addEventListener('mouseleave', () => {
      this.hover = null;
      this.draw();
    });
  }

  get nodeCount(): number {
    return this.snapshot ? this.snapshot.nodes.length : 0;
  }

  get edgeCount(): number {
    return this.layout.edges.length;
  }

  setSnapshot(snapshot: ContextSnapshot): void {
    this.snapshot = snapshot;
    this.byId = new Map(snapshot.nodes.map((n) => [n.id, n]));
    this.layout.update(snapshot);
    this.statusLine.textContent =
      `context: ${snapshot.node_count} nodes / ${snapshot.fact_count} facts` +
      (snapshot.exported_nodes < snapshot.node_count
        ? ` (showing ${snapshot.exported_nodes}, cap ${snapshot.node_cap})`
        : '');
    this.animate();
  }

  private animate(): void {
    if (typeof requestAnimationFrame !== 'function') {
      // headless test environment: settle the layout synchronously
      this.layout.tick(60);
      this.draw();
      return;
    }
    if (this.animating) return;
    this.animating = true;
    let frames = 0;
    const step = () => {
      this.layout.tick(2);
      this.draw();
      frames += 1;
      if (frames < 120) {
        requestAnimationFrame(step);
      } else {
        this.animating = false;
      }
    };
    requestAnimationFrame(step);
  }

  private onMove(ev: MouseEvent): void {
    const rect = this.canvas.getBoundingClientRect();
    const node = this.layout.nearest(ev.clientX - rect.left, ev.clientY - rect.top);
    const next = node ? node.id : null;
    if (next !== this.hover) {
      this.hover = next;
      this.draw();
    }
  }

  draw(): void {
    const ctx = this.ctx;
    if (!ctx || !this.snapshot) return;
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);

    ctx.strokeStyle = 'rgba(120,120,140,0.35)';
    ctx.lineWidth = 1;
    for (const edge of this.layout.edges) {
      const a = this.layout.position(edge.source);
      const b = this.layout.position(edge.target);
      if (!a || !b) continue;
      ctx.beginPath();
      ctx.moveTo(a.x, a.y);
      ctx.lineTo(b.x, b.y);
      ctx.stroke();
    }

    for (const pos of this.layout.nodes) {
      const node = this.byId.get(pos.id);
      if (!node) continue;
      const isQuestion = node.qa_roles.some((r) => r.role === 'question');
      const isAnswer = node.qa_roles.some((r) => r.role === 'answer');
      const radius = node.frontier ? 8 : isQuestion || isAnswer ? 7 : 4.5;
      ctx.beginPath();
      ctx.arc(pos.x, pos.y, radius, 0, Math.PI * 2);
      ctx.fillStyle = isAnswer ? '#3d9b62' : isQuestion ? '#57b88a' : KIND_FILL[node.kind];
      ctx.fill();
      if (node.frontier) {
        ctx.strokeStyle = '#e07b28';
        ctx.lineWidth = 2.5;
        ctx.stroke();
      }
    }

    if (this.hover !== null) {
      this.drawTooltip(ctx, this.hover);
    }
  }

  private drawTooltip(ctx: CanvasRenderingContext2D, id: number): void {
    const pos = this.layout.position(id);
    const node = this.byId.get(id);
    if (!pos || !node || !this.snapshot) return;
    const frontier = this.snapshot.frontiers.find((f) => f.node === id);
    const lines = [node.label + (node.external_id ? ` (${node.external_id})` : '')];
    for (const role of node.qa_roles) {
      lines.push(`${role.role} @ turn ${role.turn}`);
    }
    if (frontier) {
      lines.push(
        `match ${frontier.match.toFixed(3)}  prox ${frontier.proximity.toFixed(3)}`,
        `prior ${frontier.prior.toFixed(3)}  combined ${frontier.combined.toFixed(3)}`,
      );
    }
    ctx.font = '11px system-ui, sans-serif';
    const width = Math.max(...lines.map((l) => ctx.measureText(l).width)) + 12;
    const height = lines.length * 14 + 8;
    const x = Math.min(pos.x + 10, this.canvas.width - width - 4);
    const y = Math.max(pos.y - height - 6, 4);
    ctx.fillStyle = 'rgba(22,22,30,0.92)';
    ctx.fillRect(x, y, width, height);
    ctx.fillStyle = '#f2f2f6';
    lines.forEach((line, i) => ctx.fillText(line, x + 6, y + 15 + i * 14));
  }
}
