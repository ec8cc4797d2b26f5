/**
 * Application shell: a tab bar over the session wizard, the knowledge
 * browser, the report viewer, and a settings form. Each panel keeps its
 * own root element so switching tabs preserves in-progress state.
 */

import { WorkbenchClient } from './api.js';
import { loadSettings, saveSettings, UiSettings } from './config.js';
import { clear, h } from './dom.js';
import { KnowledgeBrowser } from './knowledge.js';
import { ReportViewer } from './reports.js';
import { SessionWizard } from './wizard.js';

export type TabName = 'solve' | 'knowledge' | 'reports' | 'settings';

const TABS: { name: TabName; label: string }[] = [
  { name: 'solve', label: 'Solve' },
  { name: 'knowledge', label: 'Knowledge' },
  { name: 'reports', label: 'Reports' },
  { name: 'settings', label: 'Settings' },
];

export class AppShell {
  readonly root: HTMLElement;
  settings: UiSettings;
  client: WorkbenchClient;

  readonly wizard: SessionWizard;
  readonly knowledge: KnowledgeBrowser;
  readonly reports: ReportViewer;

  private tab: TabName = 'solve';
  private readonly panels: Record<TabName, HTMLElement>;
  private savedNote = false;
  private loaded: Partial<Record<TabName, boolean>> = {};

  constructor(root: HTMLElement, settings?: UiSettings) {
    this.root = root;
    this.settings = settings ?? loadSettings();
    this.client = new WorkbenchClient({ baseUrl: this.settings.baseUrl, token: this.settings.token });
    this.panels = {
      solve: h('div', { class: 'panel panel-solve' }),
      knowledge: h('div', { class: 'panel panel-knowledge' }),
      reports: h('div', { class: 'panel panel-reports' }),
      settings: h('div', { class: 'panel panel-settings' }),
    };
    this.wizard = new SessionWizard(this.client, this.panels.solve);
    this.knowledge = new KnowledgeBrowser(this.client, this.panels.knowledge);
    this.reports = new ReportViewer(this.client, this.panels.reports);
    this.wizard.render();
    this.render();
  }

  show(tab: TabName): void {
    this.tab = tab;
    // lazy first load so a dead API only bothers the tab that needs it
    if (tab === 'knowledge' && this.loaded.knowledge !== true) {
      this.loaded.knowledge = true;
      void this.knowledge.load();
    }
    if (tab === 'reports' && this.loaded.reports !== true) {
      this.loaded.reports = true;
      void this.reports.loadIndex();
    }
    this.render();
  }

  private applySettings(next: UiSettings): void {
    this.settings = next;
    saveSettings(next);
    this.client = new WorkbenchClient({ baseUrl: next.baseUrl, token: next.token });
    this.wizard.setClient(this.client);
    this.knowledge.setClient(this.client);
    this.reports.setClient(this.client);
    // loaded data came from the old endpoint; refetch on next visit
    this.loaded = {};
    this.savedNote = true;
    this.render();
  }

  render(): void {
    clear(this.root);
    const nav = h('nav', { class: 'tab-bar' });
    for (const { name, label } of TABS) {
      nav.append(
        h(
          'button',
          {
            type: 'button',
            class: name === this.tab ? 'tab active' : 'tab',
            'data-tab': name,
            onclick: () => this.show(name),
          },
          label,
        ),
      );
    }
    if (this.tab === 'settings') this.renderSettings();
    this.root.append(
      h('header', { class: 'masthead' }, h('h1', {}, 'TRIZ workbench'), nav),
      this.panels[this.tab],
    );
  }

  private renderSettings(): void {
    const panel = this.panels.settings;
    clear(panel);
    const base = h('input', {
      type: 'url',
      name: 'base-url',
      value: this.settings.baseUrl,
    }) as HTMLInputElement;
    const token = h('input', {
      type: 'password',
      name: 'token',
      value: this.settings.token,
      placeholder: '(no token)',
    }) as HTMLInputElement;
    panel.append(
      h(
        'form',
        {
          class: 'settings-form',
          onsubmit: (ev: Event) => {
            ev.preventDefault();
            this.applySettings({ baseUrl: base.value.trim(), token: token.value.trim() });
          },
        },
        h('label', {}, 'API base URL', base),
        h('label', {}, 'Bearer token', token),
        h('button', { type: 'submit' }, 'Save'),
        this.savedNote ? h('p', { class: 'saved-note' }, 'Saved.') : null,
      ),
    );
  }
}

export function mount(root: HTMLElement, settings?: UiSettings): AppShell {
  return new AppShell(root, settings);
}

// auto-mount when loaded as the page's entry module
const rootEl = typeof document !== 'undefined' ? document.getElementById('app') : null;
if (rootEl !== null) {
  mount(rootEl);
}
