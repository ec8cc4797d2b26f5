// API endpoint settings, persisted per browser.

export interface UiSettings {
  baseUrl: string;
  token: string;
}

const STORAGE_KEY = 'triz-ui-settings:v1';

export function defaultBaseUrl(): string {
  // served from the API process under /ui -> same origin
  if (typeof window !== 'undefined' && window.location.origin !== 'null') {
    return window.location.origin;
  }
  return 'http://127.0.0.1:8321';
}

export function loadSettings(): UiSettings {
  try {
    const raw = localStorage.getItem(STORAGE_KEY);
    if (raw) {
      const doc = JSON.parse(raw);
      if (typeof doc.baseUrl === 'string' && typeof doc.token === 'string') {
        return doc;
      }
    }
  } catch {
    // corrupted or unavailable storage falls through to defaults
  }
  return { baseUrl: defaultBaseUrl(), token: '' };
}

export function saveSettings(settings: UiSettings): void {
  try {
    localStorage.setItem(STORAGE_KEY, JSON.stringify(settings));
  } catch {
    // storage may be denied; the in-memory settings still apply
  }
}
