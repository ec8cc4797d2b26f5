/**
 * Session wizard: Problem -> Parameters -> Mapping -> Contradictions ->
 * Principles -> Solutions.
 *
 * Guarded navigation: a submit button renders enabled only when the API
 * would accept the call for the session's current state, so the wizard
 * never issues a request the server would 409. The contradiction screen
 * is selection-only; the pair single-select and the principle
 * multi-select travel together in the one /principles checkpoint call,
 * because the workflow cannot re-choose principles from PrinciplesChosen.
 *
 * One mutation is in flight at a time; a stale-version 409 from another
 * tab surfaces as a reload prompt, never as a silent retry.
 */

import {
  ApiError,
  ApiUnreachable,
  PrincipleInfo,
  ProblemIn,
  SessionView,
  WorkbenchClient,
} from './api.js';
import { clear, h } from './dom.js';

export type ScreenName =
  | 'problem'
  | 'parameters'
  | 'mapping'
  | 'contradictions'
  | 'principles'
  | 'solutions';

export const SCREEN_ORDER: ScreenName[] = [
  'problem',
  'parameters',
  'mapping',
  'contradictions',
  'principles',
  'solutions',
];

/** The deepest screen whose inputs the session state already provides. */
export function furthestScreen(state: string): ScreenName {
  switch (state) {
    case 'ProblemEntered':
      return 'problem';
    case 'ParametersExtracted':
      return 'parameters';
    case 'ParametersMapped':
      return 'mapping';
    case 'ContradictionsAnalyzed':
      return 'contradictions';
    case 'PrinciplesChosen':
      return 'solutions';
    case 'SolutionsGenerated':
      return 'solutions';
    default:
      return 'problem';
  }
}

function screenIndex(name: ScreenName): number {
  return SCREEN_ORDER.indexOf(name);
}

interface WizardError {
  code: string;
  message: string;
  stale: boolean;
}

export class SessionWizard {
  private client: WorkbenchClient;
  private root: HTMLElement;
  view: SessionView | null = null;
  screen: ScreenName = 'problem';
  busy: string | null = null;
  error: WizardError | null = null;
  private lastAction: (() => Promise<void>) | null = null;

  // per-step selection state, explicit per the checkpoint design
  pickedOrdinals = new Set<number>();
  pickedNumbers = new Set<number>();
  pickedPair: number | null = null;
  pickedPrinciples = new Set<number>();
  manualPrinciples: PrincipleInfo[] | null = null;
  generateCount = 3;

  constructor(client: WorkbenchClient, root: HTMLElement) {
    this.client = client;
    this.root = root;
  }

  setClient(client: WorkbenchClient): void {
    this.client = client;
  }

  // -- state transitions ---------------------------------------------------

  private async run(label: string, action: () => Promise<SessionView | null>): Promise<void> {
    if (this.busy) return; // one active mutation per tab
    this.busy = label;
    this.error = null;
    this.lastAction = async () => {
      await this.run(label, action);
    };
    this.render();
    try {
      const view = await action();
      if (view) this.view = view;
      this.busy = null;
    } catch (err) {
      this.busy = null;
      if (err instanceof ApiError) {
        this.error = {
          code: err.code,
          message: err.message,
          stale:
            err.code === 'invalid_state' &&
            typeof err.details === 'object' &&
            err.details !== null &&
            'expected' in (err.details as object),
        };
      } else if (err instanceof ApiUnreachable) {
        this.error = { code: 'unreachable', message: err.message, stale: false };
      } else {
        this.error = { code: 'client', message: String(err), stale: false };
      }
    }
    this.render();
  }

  async start(problem: ProblemIn, modelId?: string, sessionId?: string): Promise<void> {
    await this.run('starting session and extracting parameters', async () => {
      const created = await this.client.createSession(problem, modelId, sessionId);
      // step 1 takes no designer input; run it as this screen's checkpoint
      const view = await this.client.runStep1(created.id, created.version);
      this.resetSelections();
      this.screen = 'parameters';
      return view;
    });
  }

  async resume(sessionId: string): Promise<void> {
    await this.run('loading session', async () => {
      const view = await this.client.getSession(sessionId);
      this.view = view;
      this.resetSelections();
      this.prefillSelections(view);
      this.screen = furthestScreen(view.state);
      return view;
    });
  }

  async submitParameters(): Promise<void> {
    const view = this.view;
    if (!view) return;
    const ordinals = [...this.pickedOrdinals].sort((a, b) => a - b);
    await this.run('mapping parameters to TRIZ (step 2)', async () => {
      const next = await this.client.runStep2(view.id, view.version, ordinals);
      this.pickedNumbers = new Set(
        next.step2_output
          .filter((m) => m.resolved && m.triz_number !== null)
          .map((m) => m.triz_number as number),
      );
      this.screen = 'mapping';
      return next;
    });
  }

  async submitMapping(): Promise<void> {
    const view = this.view;
    if (!view) return;
    // submit in presentation order (first appearance in the mapping table),
    // matching what a designer reads top to bottom
    const numbers: number[] = [];
    for (const m of view.step2_output) {
      if (!m.resolved || m.triz_number === null) continue;
      if (this.pickedNumbers.has(m.triz_number) && !numbers.includes(m.triz_number)) {
        numbers.push(m.triz_number);
      }
    }
    await this.run('analyzing contradictions (step 3)', async () => {
      const next = await this.client.runStep3(view.id, view.version, numbers);
      this.pickedPair = null;
      this.pickedPrinciples = new Set();
      this.screen = 'contradictions';
      return next;
    });
  }

  /** Selection-only screen: no API call, just advance with the picked pair. */
  goToPrinciples(): void {
    if (this.pickedPair === null) return;
    this.error = null;
    this.manualPrinciples = null;
    this.screen = 'principles';
    void this.loadCell();
  }

  private cell: PrincipleInfo[] | null = null;
  private cellEmpty = false;

  private async loadCell(): Promise<void> {
    const view = this.view;
    if (!view || this.pickedPair === null) return;
    const rel = view.step3_output[this.pickedPair];
    if (!rel || rel.improving_number === null || rel.worsening_number === null) return;
    this.cell = null;
    this.cellEmpty = false;
    this.render();
    try {
      const cell = await this.client.matrixCell(
        rel.improving_number,
        rel.worsening_number,
      );
      this.cell = cell.principles;
      this.cellEmpty = cell.principles.length === 0;
      if (this.cellEmpty && this.manualPrinciples === null) {
        // empty matrix cell: fall back to a manual picker over all 40
        this.manualPrinciples = await this.client.principles();
      }
      this.pickedPrinciples = new Set(cell.principles.map((p) => p.number));
    } catch (err) {
      this.error = {
        code: err instanceof ApiError ? err.code : 'unreachable',
        message: err instanceof Error ? err.message : String(err),
        stale: false,
      };
    }
    this.render();
  }

  async submitPrinciples(): Promise<void> {
    const view = this.view;
    if (!view || this.pickedPair === null) return;
    const chosen = this.pickedPair;
    const picked = [...this.pickedPrinciples].sort((a, b) => a - b);
    await this.run('recording principle choices', async () => {
      const next = await this.client.choosePrinciples(view.id, view.version, chosen, picked);
      this.screen = 'solutions';
      return next;
    });
  }

  async generate(principle: number): Promise<void> {
    const view = this.view;
    if (!view) return;
    await this.run(`generating solutions for principle ${principle} (step 4)`, () =>
      this.client.runStep4(view.id, view.version, principle, this.generateCount),
    );
  }

  /** Back re-reads persisted state; it never forges a transition. */
  async back(): Promise<void> {
    const view = this.view;
    const index = screenIndex(this.screen);
    if (index <= 0) return;
    const target = SCREEN_ORDER[index - 1] as ScreenName;
    if (!view) {
      this.screen = target;
      this.render();
      return;
    }
    await this.run('reloading session', async () => {
      const fresh = await this.client.getSession(view.id);
      this.prefillSelections(fresh);
      this.screen = target;
      return fresh;
    });
  }

  async reloadAfterConflict(): Promise<void> {
    const view = this.view;
    if (!view) return;
    await this.run('reloading session', async () => {
      const fresh = await this.client.getSession(view.id);
      this.prefillSelections(fresh);
      this.screen = furthestScreen(fresh.state);
      return fresh;
    });
  }

  retry(): void {
    const action = this.lastAction;
    if (action) void action();
  }

  private resetSelections(): void {
    this.pickedOrdinals = new Set();
    this.pickedNumbers = new Set();
    this.pickedPair = null;
    this.pickedPrinciples = new Set();
    this.manualPrinciples = null;
    this.cell = null;
    this.cellEmpty = false;
  }

  private prefillSelections(view: SessionView): void {
    this.pickedOrdinals = new Set(view.step1_output.map((p) => p.ordinal));
    this.pickedNumbers = new Set(view.selected_triz_parameters);
    if (view.selected_contradiction) {
      this.pickedPair = view.step3_output.findIndex(
        (r) =>
          r.improving_number === view.selected_contradiction?.improving_number &&
          r.worsening_number === view.selected_contradiction?.worsening_number,
      );
      if (this.pickedPair < 0) this.pickedPair = null;
    }
    this.pickedPrinciples = new Set(view.selected_principles);
  }

  // -- rendering -------------------------------------------------------------

  render(): void {
    const root = clear(this.root);
    root.append(this.renderNav());
    if (this.busy) {
      root.append(
        h('p', { class: 'pending', role: 'status' }, `Working: ${this.busy}…`),
      );
    }
    if (this.error) root.append(this.renderError(this.error));
    switch (this.screen) {
      case 'problem':
        root.append(this.renderProblem());
        break;
      case 'parameters':
        root.append(this.renderParameters());
        break;
      case 'mapping':
        root.append(this.renderMapping());
        break;
      case 'contradictions':
        root.append(this.renderContradictions());
        break;
      case 'principles':
        root.append(this.renderPrinciples());
        break;
      case 'solutions':
        root.append(this.renderSolutions());
        break;
    }
  }

  private renderNav(): HTMLElement {
    const items = SCREEN_ORDER.map((name, i) => {
      const cls = ['crumb'];
      if (name === this.screen) cls.push('active');
      if (this.view && i <= screenIndex(furthestScreen(this.view.state))) {
        cls.push('reached');
      }
      return h('li', { class: cls.join(' ') }, `${i + 1}. ${name}`);
    });
    const bar = h('ol', { class: 'crumbs' }, ...items);
    const back = h(
      'button',
      {
        class: 'back',
        type: 'button',
        disabled: this.screen === 'problem' || this.busy !== null,
        onclick: () => void this.back(),
      },
      'Back',
    );
    const state = this.view
      ? h(
          'span',
          { class: 'session-state', 'data-state': this.view.state },
          `${this.view.id} · ${this.view.state} · v${this.view.version}`,
        )
      : h('span', { class: 'session-state' }, 'no session');
    return h('header', { class: 'wizard-nav' }, back, bar, state);
  }

  private renderError(error: WizardError): HTMLElement {
    const box = h(
      'div',
      { class: 'error-banner', 'data-code': error.code },
      h('strong', {}, error.code),
      ` ${error.message} `,
    );
    if (error.stale) {
      box.append(
        h(
          'button',
          { type: 'button', class: 'reload', onclick: () => void this.reloadAfterConflict() },
          'Reload session',
        ),
      );
    } else {
      box.append(
        h('button', { type: 'button', class: 'retry', onclick: () => this.retry() }, 'Retry'),
      );
    }
    return box;
  }

  private renderProblem(): HTMLElement {
    const view = this.view;
    const value = (field: keyof ProblemIn) => view?.problem[field] ?? '';
    const area = (name: keyof ProblemIn, label: string) =>
      h(
        'label',
        { class: 'field' },
        label,
        h('textarea', { name, rows: '3' }, value(name)),
      );
    const form = h(
      'form',
      {
        class: 'problem-form',
        onsubmit: ((event: Event) => {
          event.preventDefault();
          const el = event.currentTarget as HTMLFormElement;
          const read = (name: string) =>
            (el.querySelector(`[name=${name}]`) as HTMLTextAreaElement).value.trim();
          const problem: ProblemIn = {
            scenario: read('scenario'),
            current_state: read('current_state'),
            pain_point: read('pain_point'),
            requirement: read('requirement'),
          };
          const model = (el.querySelector('[name=model]') as HTMLInputElement).value.trim();
          const sid = (el.querySelector('[name=session]') as HTMLInputElement).value.trim();
          void this.start(problem, model || undefined, sid || undefined);
        }) as EventListener,
      },
      area('scenario', 'Scenario'),
      area('current_state', 'Current state'),
      area('pain_point', 'Pain point'),
      area('requirement', 'Requirement'),
      h(
        'label',
        { class: 'field' },
        'Model',
        h('input', { name: 'model', placeholder: 'default model' }),
      ),
      h(
        'label',
        { class: 'field' },
        'Session id',
        // optional; a fixed id is what makes replay-backed demo runs hit
        // their recorded transcripts
        h('input', { name: 'session', placeholder: 'generated if blank' }),
      ),
      h(
        'button',
        { type: 'submit', class: 'next', disabled: this.busy !== null },
        'Start session',
      ),
    );
    const panel = h('section', { class: 'screen screen-problem' }, h('h2', {}, 'Problem'), form);
    if (view) {
      panel.append(
        h(
          'p',
          { class: 'hint' },
          'A session is already running; going forward continues it, submitting starts a new one.',
        ),
      );
    }
    return panel;
  }

  private renderParameters(): HTMLElement {
    const view = this.view;
    const panel = h(
      'section',
      { class: 'screen screen-parameters' },
      h('h2', {}, 'Parameters'),
    );
    if (!view || view.step1_output.length === 0) {
      panel.append(h('p', { class: 'empty' }, 'No extracted parameters yet.'));
      return panel;
    }
    const list = h('ul', { class: 'checklist parameter-checklist' });
    for (const param of view.step1_output) {
      const box = h('input', {
        type: 'checkbox',
        'data-ordinal': String(param.ordinal),
        checked: this.pickedOrdinals.has(param.ordinal),
        onchange: ((event: Event) => {
          const el = event.currentTarget as HTMLInputElement;
          if (el.checked) this.pickedOrdinals.add(param.ordinal);
          else this.pickedOrdinals.delete(param.ordinal);
          this.render();
        }) as EventListener,
      }) as HTMLInputElement;
      box.checked = this.pickedOrdinals.has(param.ordinal);
      list.append(
        h(
          'li',
          {},
          h(
            'label',
            {},
            box,
            h('strong', {}, ` ${param.ordinal}. ${param.name}`),
            param.explanation ? ` — ${param.explanation}` : '',
          ),
        ),
      );
    }
    // step 3 needs two sides of a contradiction: require >= 2 picks here
    const enough = this.pickedOrdinals.size >= 2;
    // step 2 only runs once; after ParametersExtracted the API rejects it
    const legal = view.state === 'ParametersExtracted';
    const next = h(
      'button',
      {
        type: 'button',
        class: 'next',
        disabled: !enough || !legal || this.busy !== null,
        onclick: () => void this.submitParameters(),
      },
      'Map to TRIZ parameters',
    );
    panel.append(list);
    if (!enough) panel.append(h('p', { class: 'hint' }, 'Select at least two parameters.'));
    panel.append(next);
    return panel;
  }

  private renderMapping(): HTMLElement {
    const view = this.view;
    const panel = h('section', { class: 'screen screen-mapping' }, h('h2', {}, 'Mapping'));
    if (!view || view.step2_output.length === 0) {
      panel.append(h('p', { class: 'empty' }, 'No TRIZ mapping yet.'));
      return panel;
    }
    const table = h(
      'table',
      { class: 'mapping-table' },
      h(
        'thead',
        {},
        h(
          'tr',
          {},
          h('th', {}, 'Use'),
          h('th', {}, 'Problem parameter'),
          h('th', {}, 'TRIZ parameter'),
        ),
      ),
    );
    const body = h('tbody', {});
    const seen = new Set<number>();
    for (const mapping of view.step2_output) {
      const number = mapping.triz_number;
      const usable = mapping.resolved && number !== null && !seen.has(number);
      if (number !== null) seen.add(number);
      const box = h('input', {
        type: 'checkbox',
        'data-number': number === null ? '' : String(number),
        disabled: !usable,
        onchange: ((event: Event) => {
          const el = event.currentTarget as HTMLInputElement;
          if (number === null) return;
          if (el.checked) this.pickedNumbers.add(number);
          else this.pickedNumbers.delete(number);
          this.render();
        }) as EventListener,
      }) as HTMLInputElement;
      box.checked = number !== null && this.pickedNumbers.has(number);
      body.append(
        h(
          'tr',
          { class: mapping.resolved ? 'resolved' : 'unresolved' },
          h('td', {}, box),
          h('td', {}, mapping.source.name),
          h(
            'td',
            {},
            mapping.resolved ? `${number}. ${mapping.triz_name}` : '(unresolved)',
          ),
        ),
      );
    }
    table.append(body);
    const enough = this.pickedNumbers.size >= 2;
    // like step 2, step 3 is a one-shot transition out of ParametersMapped
    const legal = view.state === 'ParametersMapped';
    panel.append(table);
    if (!enough) panel.append(h('p', { class: 'hint' }, 'Step 3 needs at least two TRIZ parameters.'));
    panel.append(
      h(
        'button',
        {
          type: 'button',
          class: 'next',
          disabled: !enough || !legal || this.busy !== null,
          onclick: () => void this.submitMapping(),
        },
        'Analyze contradictions',
      ),
    );
    return panel;
  }

  private renderContradictions(): HTMLElement {
    const view = this.view;
    const panel = h(
      'section',
      { class: 'screen screen-contradictions' },
      h('h2', {}, 'Contradictions'),
    );
    if (!view || view.step3_output.length === 0) {
      panel.append(h('p', { class: 'empty' }, 'No contradictions analyzed yet.'));
      return panel;
    }
    const list = h('ul', { class: 'pair-list' });
    view.step3_output.forEach((rel, index) => {
      const radio = h('input', {
        type: 'radio',
        name: 'pair',
        'data-index': String(index),
        disabled: !rel.complete,
        onchange: () => {
          this.pickedPair = index;
          this.render();
        },
      }) as HTMLInputElement;
      radio.checked = this.pickedPair === index;
      const label = rel.complete
        ? `improving ${rel.improving_number}. ${rel.improving_name} / ` +
          `worsening ${rel.worsening_number}. ${rel.worsening_name}`
        : `${rel.improving_name || '?'} / ${rel.worsening_name || '?'} (incomplete)`;
      list.append(
        h(
          'li',
          { class: rel.complete ? 'complete' : 'incomplete' },
          h('label', {}, radio, ` ${label}`),
          rel.explanation ? h('p', { class: 'explanation' }, rel.explanation) : null,
        ),
      );
    });
    panel.append(
      h('p', { class: 'hint' }, 'One contradiction at a time; pick the pair to resolve.'),
      list,
      h(
        'button',
        {
          type: 'button',
          class: 'next',
          disabled: this.pickedPair === null || this.busy !== null,
          onclick: () => this.goToPrinciples(),
        },
        'Review principles',
      ),
    );
    return panel;
  }

  private renderPrinciples(): HTMLElement {
    const view = this.view;
    const panel = h(
      'section',
      { class: 'screen screen-principles' },
      h('h2', {}, 'Principles'),
    );
    if (!view || this.pickedPair === null) {
      panel.append(h('p', { class: 'empty' }, 'Pick a contradiction first.'));
      return panel;
    }
    const rel = view.step3_output[this.pickedPair];
    if (rel) {
      panel.append(
        h(
          'p',
          { class: 'pair-summary' },
          `Matrix cell for improving ${rel.improving_number} / worsening ${rel.worsening_number}:`,
        ),
      );
    }
    const source = this.cellEmpty ? this.manualPrinciples : this.cell;
    if (source === null) {
      panel.append(h('p', { class: 'pending' }, 'Loading recommendations…'));
      return panel;
    }
    if (this.cellEmpty) {
      panel.append(
        h(
          'p',
          { class: 'hint manual-picker-note' },
          'The matrix cell is empty; pick principles manually.',
        ),
      );
    }
    const list = h('ul', {
      class: this.cellEmpty ? 'checklist principle-picker manual' : 'checklist principle-picker',
    });
    for (const principle of source ?? []) {
      const box = h('input', {
        type: 'checkbox',
        'data-principle': String(principle.number),
        onchange: ((event: Event) => {
          const el = event.currentTarget as HTMLInputElement;
          if (el.checked) this.pickedPrinciples.add(principle.number);
          else this.pickedPrinciples.delete(principle.number);
          this.render();
        }) as EventListener,
      }) as HTMLInputElement;
      box.checked = this.pickedPrinciples.has(principle.number);
      list.append(
        h(
          'li',
          {},
          h(
            'label',
            {},
            box,
            h('strong', {}, ` ${principle.number}-${principle.name}`),
          ),
          principle.description
            ? h('p', { class: 'description' }, principle.description)
            : null,
        ),
      );
    }
    const legal = view.state === 'ContradictionsAnalyzed' || view.state === 'SolutionsGenerated';
    panel.append(
      list,
      h(
        'button',
        {
          type: 'button',
          class: 'next',
          disabled: this.pickedPrinciples.size === 0 || !legal || this.busy !== null,
          onclick: () => void this.submitPrinciples(),
        },
        'Choose principles',
      ),
    );
    return panel;
  }

  private renderSolutions(): HTMLElement {
    const view = this.view;
    const panel = h('section', { class: 'screen screen-solutions' }, h('h2', {}, 'Solutions'));
    if (!view || view.selected_principles.length === 0) {
      panel.append(h('p', { class: 'empty' }, 'No principles chosen yet.'));
      return panel;
    }
    const legal = view.state === 'PrinciplesChosen' || view.state === 'SolutionsGenerated';
    for (const principle of view.selected_principles) {
      const cards = view.solutions.filter((s) => s.principle_number === principle);
      const block = h(
        'div',
        { class: 'principle-block', 'data-principle': String(principle) },
        h('h3', {}, `Principle ${principle}`),
      );
      for (const solution of cards) {
        block.append(
          h(
            'article',
            { class: 'solution-card' },
            h('p', {}, solution.text),
            solution.keywords.length
              ? h('p', { class: 'keywords' }, solution.keywords.join(', '))
              : null,
          ),
        );
      }
      block.append(
        h(
          'button',
          {
            type: 'button',
            class: 'generate',
            'data-principle': String(principle),
            disabled: !legal || this.busy !== null,
            onclick: () => void this.generate(principle),
          },
          cards.length ? 'Generate more' : 'Generate solutions',
        ),
      );
      panel.append(block);
    }
    return panel;
  }
}
