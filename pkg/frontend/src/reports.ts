/**
 * Evaluation report viewer: a Table-1-style aggregate summary, a per-case
 * dot strip, the failure list, and the keyword scatter. Every number on
 * screen is read from an API payload; the viewer formats and never
 * recomputes. The scatter goes through POST /projection so the reduction
 * also stays server-side.
 */

import {
  ApiError,
  ApiUnreachable,
  KeywordPair,
  ReportDoc,
  ReportSummary,
  ScatterPoint,
  WorkbenchClient,
} from './api.js';
import { clear, h } from './dom.js';
import { renderScatter } from './scatter.js';

function describeError(err: unknown): string {
  if (err instanceof ApiError) return `${err.code}: ${err.message}`;
  if (err instanceof ApiUnreachable) return err.message;
  return String(err);
}

const fmt = (value: number | null): string => (value === null ? '—' : value.toFixed(3));

/** "label | source" per line; blank lines and missing sources are dropped. */
export function parseKeywordLines(text: string): KeywordPair[] {
  const pairs: KeywordPair[] = [];
  for (const line of text.split('\n')) {
    const trimmed = line.trim();
    if (trimmed === '') continue;
    const at = trimmed.lastIndexOf('|');
    if (at === -1) continue;
    const label = trimmed.slice(0, at).trim();
    const source = trimmed.slice(at + 1).trim();
    if (label === '' || source === '') continue;
    pairs.push({ label, source });
  }
  return pairs;
}

export class ReportViewer {
  private client: WorkbenchClient;
  private readonly root: HTMLElement;

  private index: ReportSummary[] | null = null;
  private indexNote: string | null = null;

  private reportId: string | null = null;
  private report: ReportDoc | null = null;
  private reportNote: string | null = null;

  private keywordText = '';
  private points: ScatterPoint[] | null = null;
  private scatterNote: string | null = null;
  private projecting = false;

  constructor(client: WorkbenchClient, root: HTMLElement) {
    this.client = client;
    this.root = root;
  }

  setClient(client: WorkbenchClient): void {
    this.client = client;
  }

  async loadIndex(): Promise<void> {
    try {
      this.index = await this.client.reports();
      this.indexNote = null;
    } catch (err) {
      this.index = null;
      this.indexNote = describeError(err);
    }
    this.render();
  }

  async open(id: string): Promise<void> {
    this.reportId = id;
    this.report = null;
    this.points = null;
    this.scatterNote = null;
    this.render();
    try {
      this.report = await this.client.report(id);
      this.reportNote = null;
      await this.prefillKeywords(this.report);
    } catch (err) {
      this.reportNote = describeError(err);
    }
    this.render();
  }

  /** Solution keywords live on the cases, not in the report: join on the
   * scored case ids so the scatter box starts with the relevant phrases. */
  private async prefillKeywords(report: ReportDoc): Promise<void> {
    try {
      const collection = await this.client.cases();
      const scored = new Set(report.case_scores.map((s) => s.case_id));
      const lines: string[] = [];
      for (const item of collection.cases) {
        if (!scored.has(item.id)) continue;
        for (const keyword of item.solution_keywords) {
          lines.push(`${keyword.phrase} | ${keyword.source}`);
        }
      }
      this.keywordText = lines.join('\n');
    } catch {
      this.keywordText = '';
    }
  }

  async project(): Promise<void> {
    const pairs = parseKeywordLines(this.keywordText);
    if (pairs.length < 3) {
      // the reduction needs at least three phrases; keep this off the wire
      this.scatterNote = 'Projection needs at least three keywords.';
      this.points = null;
      this.render();
      return;
    }
    this.projecting = true;
    this.render();
    try {
      const out = await this.client.project(pairs);
      this.points = out.points;
      this.scatterNote = out.findings.length > 0
        ? out.findings.map((f) => `${f.label}: ${f.message}`).join('; ')
        : null;
    } catch (err) {
      // partial render: the tables above stay up, only the plot is missing
      this.points = null;
      this.scatterNote = describeError(err);
    }
    this.projecting = false;
    this.render();
  }

  render(): void {
    clear(this.root);
    const panel = h('section', { class: 'reports' });
    panel.append(this.renderPicker());
    if (this.reportNote !== null) {
      panel.append(
        h(
          'div',
          { class: 'error-banner', 'data-code': 'report' },
          h('span', {}, this.reportNote + ' '),
          this.reportId !== null
            ? h(
                'button',
                { type: 'button', class: 'retry', onclick: () => void this.open(this.reportId ?? '') },
                'Retry',
              )
            : null,
        ),
      );
    }
    if (this.report !== null) {
      if (this.report.case_scores.length === 0 && this.report.errors.length === 0) {
        panel.append(
          h(
            'div',
            { class: 'empty-state' },
            h('h2', {}, 'Nothing to show'),
            h('p', {}, 'This report scored no cases and recorded no failures.'),
          ),
        );
      } else {
        panel.append(this.renderSummary(this.report));
        panel.append(this.renderCaseStrip(this.report));
        if (this.report.errors.length > 0) panel.append(this.renderErrors(this.report));
        panel.append(this.renderScatterPanel());
      }
    }
    this.root.append(panel);
  }

  private renderPicker(): HTMLElement {
    const picker = h('section', { class: 'report-picker' }, h('h2', {}, 'Evaluation reports'));
    if (this.indexNote !== null) {
      picker.append(
        h(
          'div',
          { class: 'error-banner', 'data-code': 'report-index' },
          h('span', {}, `Report index unavailable. ${this.indexNote} `),
          h('button', { type: 'button', class: 'retry', onclick: () => void this.loadIndex() }, 'Retry'),
        ),
      );
    } else if (this.index === null) {
      picker.append(h('p', { class: 'hint' }, 'Loading report index…'));
    } else if (this.index.length === 0) {
      picker.append(
        h(
          'div',
          { class: 'empty-state' },
          h('p', {}, 'No reports yet. Run an evaluation to produce one.'),
        ),
      );
    } else {
      const list = h('ul', { class: 'report-list' });
      for (const row of this.index) {
        list.append(
          h(
            'li',
            { 'data-report': row.id },
            h(
              'button',
              { type: 'button', class: 'open-report', onclick: () => void this.open(row.id) },
              `${row.id} · step ${row.step} · ${row.collection} · ${row.case_count} scored`,
            ),
          ),
        );
      }
      picker.append(list);
    }
    const idInput = h('input', {
      type: 'text',
      name: 'report-id',
      placeholder: 'report id',
    }) as HTMLInputElement;
    picker.append(
      h(
        'form',
        {
          class: 'report-id-form',
          onsubmit: (ev: Event) => {
            ev.preventDefault();
            if (idInput.value.trim() !== '') void this.open(idInput.value.trim());
          },
        },
        idInput,
        h('button', { type: 'submit' }, 'Open'),
      ),
    );
    return picker;
  }

  private renderSummary(report: ReportDoc): HTMLElement {
    const metrics: { key: keyof typeof report.aggregates[number]; label: string }[] =
      report.step === 3
        ? [
            { key: 'mean_recall', label: 'Recall' },
            { key: 'mean_precision', label: 'Precision' },
          ]
        : [
            { key: 'mean_similarity', label: 'Mean similarity' },
            { key: 'sd_similarity', label: 'SD similarity' },
          ];
    const head = h('tr', {}, h('th', {}, 'Model'), h('th', {}, 'Metric'));
    for (const strategy of report.strategies) {
      head.append(h('th', { class: 'strategy-column', 'data-strategy': strategy }, strategy));
    }
    const table = h('table', { class: 'summary-table' }, h('thead', {}, head));
    const body = h('tbody', {});
    const cell = (model: string, strategy: string, key: string): number | null => {
      const row = report.aggregates.find((a) => a.model_id === model && a.strategy === strategy);
      if (row === undefined) return null;
      return (row as unknown as Record<string, number | null>)[key] ?? null;
    };
    for (const model of report.model_ids) {
      for (const metric of metrics) {
        const tr = h(
          'tr',
          { 'data-model': model, 'data-metric': String(metric.key) },
          h('td', {}, model),
          h('td', {}, metric.label),
        );
        for (const strategy of report.strategies) {
          tr.append(h('td', { class: 'metric' }, fmt(cell(model, strategy, String(metric.key)))));
        }
        body.append(tr);
      }
    }
    table.append(body);
    return h(
      'section',
      { class: 'report-summary' },
      h(
        'h2',
        {},
        `Step ${report.step} · ${report.collection} · ${report.aggregation} over ` +
          `${report.case_scores.length} scored rows`,
      ),
      h('div', { class: 'table-scroll' }, table),
    );
  }

  /** One row per strategy/model, a dot per case, position = score. */
  private renderCaseStrip(report: ReportDoc): HTMLElement {
    const metric = report.step === 3 ? 'recall' : 'similarity';
    const section = h(
      'section',
      { class: 'case-strip' },
      h('h2', {}, `Per-case ${metric}`),
    );
    for (const model of report.model_ids) {
      for (const strategy of report.strategies) {
        const rows = report.case_scores.filter(
          (s) => s.model_id === model && s.strategy === strategy,
        );
        if (rows.length === 0) continue;
        const lane = h(
          'div',
          { class: 'strip-lane', 'data-model': model, 'data-strategy': strategy },
          h('span', { class: 'lane-label' }, `${model} / ${strategy}`),
        );
        const track = h('div', { class: 'lane-track' });
        for (const score of rows) {
          const value = metric === 'recall' ? score.recall : score.similarity;
          if (value === null) continue;
          const dot = h('span', {
            class: 'case-dot',
            'data-case': score.case_id,
            title: `${score.case_id}: ${value.toFixed(3)}`,
          });
          // scores live in [0, 1]; position directly
          dot.style.left = `${(value * 100).toFixed(1)}%`;
          track.append(dot);
        }
        lane.append(track);
        section.append(lane);
      }
    }
    return section;
  }

  private renderErrors(report: ReportDoc): HTMLElement {
    const list = h('ul', { class: 'error-list' });
    for (const e of report.errors) {
      list.append(
        h(
          'li',
          { 'data-case': e.case_id },
          `${e.case_id} · ${e.strategy || '(pre-strategy)'} · ${e.stage}: ${e.message}`,
        ),
      );
    }
    return h(
      'section',
      { class: 'report-errors' },
      h('h2', {}, `Failures (${report.errors.length})`),
      list,
    );
  }

  private renderScatterPanel(): HTMLElement {
    const box = h('textarea', {
      class: 'keyword-box',
      name: 'keywords',
      rows: '8',
      oninput: (ev: Event) => {
        this.keywordText = (ev.target as HTMLTextAreaElement).value;
      },
    }) as HTMLTextAreaElement;
    box.value = this.keywordText;
    const section = h(
      'section',
      { class: 'scatter-panel' },
      h('h2', {}, 'Keyword scatter'),
      h('p', { class: 'hint' }, 'One "phrase | source" per line. Projection runs server-side.'),
      box,
      h(
        'button',
        {
          type: 'button',
          class: 'project',
          disabled: this.projecting,
          onclick: () => void this.project(),
        },
        this.projecting ? 'Projecting…' : 'Project keywords',
      ),
    );
    if (this.scatterNote !== null) {
      section.append(h('p', { class: 'scatter-note' }, this.scatterNote));
    }
    if (this.points !== null) {
      section.append(renderScatter(this.points));
    }
    return section;
  }
}
