/**
 * Read-only browser over the TRIZ knowledge tables: the 39 engineering
 * parameters, the 40 inventive principles, and a contradiction-matrix
 * cell inspector. Everything shown here comes straight from the API;
 * the browser never caches across reloads and never edits anything.
 */

import {
  ApiError,
  ApiUnreachable,
  MatrixCell,
  ParameterInfo,
  PrincipleInfo,
  WorkbenchClient,
} from './api.js';
import { clear, h } from './dom.js';

function describeError(err: unknown): string {
  if (err instanceof ApiError) return `${err.code}: ${err.message}`;
  if (err instanceof ApiUnreachable) return err.message;
  return String(err);
}

export class KnowledgeBrowser {
  private client: WorkbenchClient;
  private readonly root: HTMLElement;

  private parameters: ParameterInfo[] | null = null;
  private principles: PrincipleInfo[] | null = null;
  private outage: string | null = null;

  private query = '';

  // matrix inspector state
  private improving: number | null = null;
  private worsening: number | null = null;
  private cell: MatrixCell | null = null;
  private cellNote: string | null = null;

  constructor(client: WorkbenchClient, root: HTMLElement) {
    this.client = client;
    this.root = root;
  }

  setClient(client: WorkbenchClient): void {
    this.client = client;
  }

  async load(): Promise<void> {
    try {
      const [parameters, principles] = await Promise.all([
        this.client.parameters(),
        this.client.principles(),
      ]);
      this.parameters = parameters;
      this.principles = principles;
      this.outage = null;
    } catch (err) {
      this.outage = describeError(err);
    }
    this.render();
  }

  async inspect(): Promise<void> {
    this.cell = null;
    if (this.improving === null || this.worsening === null) {
      this.cellNote = 'Pick both an improving and a worsening parameter.';
      this.render();
      return;
    }
    if (this.improving === this.worsening) {
      // a parameter cannot contradict itself; keep this off the wire
      this.cellNote = 'Choose two different parameters.';
      this.render();
      return;
    }
    this.cellNote = null;
    try {
      this.cell = await this.client.matrixCell(this.improving, this.worsening);
    } catch (err) {
      this.cellNote = describeError(err);
    }
    this.render();
  }

  render(): void {
    clear(this.root);
    const panel = h('section', { class: 'knowledge' });
    if (this.outage !== null) {
      panel.append(
        h(
          'div',
          { class: 'error-banner', 'data-code': 'knowledge' },
          h('span', {}, `Knowledge tables unavailable. ${this.outage} `),
          h('button', { type: 'button', class: 'retry', onclick: () => void this.load() }, 'Retry'),
        ),
      );
      this.root.append(panel);
      return;
    }
    if (this.parameters === null || this.principles === null) {
      panel.append(h('p', { class: 'hint' }, 'Loading knowledge tables…'));
      this.root.append(panel);
      return;
    }
    panel.append(
      h('input', {
        type: 'search',
        class: 'knowledge-search',
        placeholder: 'Filter parameters and principles',
        value: this.query,
        oninput: (ev: Event) => {
          this.query = (ev.target as HTMLInputElement).value;
          this.render();
        },
      }),
      this.renderMatrixInspector(),
      this.renderParameters(),
      this.renderPrinciples(),
    );
    this.root.append(panel);
  }

  private matches(...texts: string[]): boolean {
    if (this.query.trim() === '') return true;
    const needle = this.query.trim().toLowerCase();
    return texts.some((t) => t.toLowerCase().includes(needle));
  }

  private renderParameters(): HTMLElement {
    const params = (this.parameters ?? []).filter((p) =>
      this.matches(String(p.number), p.name, p.definition),
    );
    const table = h(
      'table',
      { class: 'parameter-table' },
      h('thead', {}, h('tr', {}, h('th', {}, '#'), h('th', {}, 'Parameter'), h('th', {}, 'Definition'))),
    );
    const body = h('tbody', {});
    for (const p of params) {
      body.append(
        h(
          'tr',
          { 'data-number': String(p.number) },
          h('td', {}, String(p.number)),
          h('td', {}, p.name),
          h('td', {}, p.definition),
        ),
      );
    }
    table.append(body);
    return h(
      'section',
      { class: 'parameter-section' },
      h('h2', {}, `Engineering parameters (${params.length})`),
      table,
    );
  }

  private renderPrinciples(): HTMLElement {
    const principles = (this.principles ?? []).filter((p) =>
      this.matches(String(p.number), p.name, p.description),
    );
    const table = h(
      'table',
      { class: 'principle-table' },
      h('thead', {}, h('tr', {}, h('th', {}, '#'), h('th', {}, 'Principle'), h('th', {}, 'Description'))),
    );
    const body = h('tbody', {});
    for (const p of principles) {
      body.append(
        h(
          'tr',
          { 'data-number': String(p.number) },
          h('td', {}, String(p.number)),
          h('td', {}, p.name),
          h('td', {}, p.description),
        ),
      );
    }
    table.append(body);
    return h(
      'section',
      { class: 'principle-section' },
      h('h2', {}, `Inventive principles (${principles.length})`),
      table,
    );
  }

  private renderMatrixInspector(): HTMLElement {
    const select = (name: 'improving' | 'worsening', value: number | null): HTMLElement => {
      const el = h('select', {
        name,
        onchange: (ev: Event) => {
          const raw = (ev.target as HTMLSelectElement).value;
          const parsed = raw === '' ? null : Number(raw);
          if (name === 'improving') this.improving = parsed;
          else this.worsening = parsed;
        },
      }) as HTMLSelectElement;
      el.append(h('option', { value: '' }, `(${name})`));
      for (const p of this.parameters ?? []) {
        const opt = h('option', { value: String(p.number) }, `${p.number}. ${p.name}`);
        if (value === p.number) opt.setAttribute('selected', '');
        el.append(opt);
      }
      return el;
    };
    const section = h(
      'section',
      { class: 'matrix-inspector' },
      h('h2', {}, 'Matrix cell'),
      h(
        'div',
        { class: 'matrix-controls' },
        select('improving', this.improving),
        select('worsening', this.worsening),
        h('button', { type: 'button', class: 'inspect', onclick: () => void this.inspect() }, 'Look up'),
      ),
    );
    if (this.cellNote !== null) {
      section.append(h('p', { class: 'cell-note' }, this.cellNote));
    }
    if (this.cell !== null) {
      const name = (n: number): string =>
        (this.parameters ?? []).find((p) => p.number === n)?.name ?? `parameter ${n}`;
      const head = `Improving ${this.cell.improving}. ${name(this.cell.improving)} / ` +
        `worsening ${this.cell.worsening}. ${name(this.cell.worsening)}`;
      section.append(h('p', { class: 'cell-pair' }, head));
      if (this.cell.principles.length === 0) {
        section.append(h('p', { class: 'cell-empty' }, 'This cell is empty: the matrix offers no recommendation.'));
      } else {
        const list = h('ol', { class: 'cell-principles' });
        for (const p of this.cell.principles) {
          list.append(h('li', { 'data-principle': String(p.number) }, `${p.number}. ${p.name}`));
        }
        section.append(list);
      }
    }
    return section;
  }
}
