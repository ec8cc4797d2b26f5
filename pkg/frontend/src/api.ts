/**
 * Typed client for the workbench API.
 *
 * Every mutation carries the session version it was read at; the server
 * answers 409 invalid_state when that version is stale (lost-update
 * protection) or when the step is illegal for the session's state. All
 * failures land here as ApiError with the server's machine-stable code.
 */

export interface ProblemIn {
  scenario: string;
  current_state: string;
  pain_point: string;
  requirement: string;
}

export interface ParameterOut {
  ordinal: number;
  name: string;
  explanation: string;
}

export interface MappingOut {
  source: ParameterOut;
  triz_number: number | null;
  triz_name: string;
  resolved: boolean;
}

export interface RelationOut {
  improving_number: number | null;
  improving_name: string;
  worsening_number: number | null;
  worsening_name: string;
  explanation: string;
  complete: boolean;
}

export interface SolutionOut {
  principle_number: number;
  text: string;
  generation_index: number;
  keywords: string[];
}

export interface SessionView {
  id: string;
  state: string;
  version: number;
  model_id: string;
  problem: ProblemIn;
  step1_output: ParameterOut[];
  step2_output: MappingOut[];
  selected_triz_parameters: number[];
  step3_output: RelationOut[];
  selected_contradiction: RelationOut | null;
  recommended_principles: number[];
  selected_principles: number[];
  solutions: SolutionOut[];
  strategy_choices: Record<string, string>;
  step_errors: { step: number; tag: string; message: string }[];
}

/** POST /sessions answers with a summary, not the full view. */
export interface SessionStub {
  id: string;
  state: string;
  version: number;
  model_id: string;
}

export interface ParameterInfo {
  number: number;
  name: string;
  definition: string;
}

export interface PrincipleInfo {
  number: number;
  name: string;
  description: string;
}

export interface MatrixCell {
  improving: number;
  worsening: number;
  principles: PrincipleInfo[];
}

export interface CaseKeyword {
  source: string;
  phrase: string;
}

export interface CaseOut {
  id: string;
  title: string;
  domain_tag: string;
  problem: ProblemIn;
  solution_keywords: CaseKeyword[];
}

export interface CollectionOut {
  name: string;
  few_shot_case_ids: string[];
  cases: CaseOut[];
}

export interface AggregateRow {
  strategy: string;
  model_id: string;
  case_count: number;
  mean_recall: number | null;
  mean_precision: number | null;
  mean_similarity: number | null;
  sd_similarity: number | null;
  mean_pair_count: number | null;
  mean_parameter_count: number | null;
}

export interface CaseScoreRow {
  case_id: string;
  strategy: string;
  model_id: string;
  recall: number | null;
  precision: number | null;
  similarity: number | null;
}

export interface ReportDoc {
  step: number;
  collection: string;
  strategies: string[];
  model_ids: string[];
  match_mode: string;
  aggregation: string;
  created_at: string;
  case_scores: CaseScoreRow[];
  aggregates: AggregateRow[];
  errors: { case_id: string; strategy: string; model_id: string; stage: string; message: string }[];
}

export interface ReportSummary {
  id: string;
  step: number;
  collection: string;
  created_at: string;
  case_count: number;
}

export interface KeywordPair {
  label: string;
  source: string;
}

export interface ScatterPoint {
  label: string;
  source: string;
  x: number;
  y: number;
}

export interface ProjectionOut {
  method: string;
  points: ScatterPoint[];
  findings: { label: string; source: string; message: string }[];
}

export interface JobOut {
  id: string;
  kind: string;
  status: string;
  report_id: string | null;
  error: string | null;
}

export class ApiError extends Error {
  code: string;
  status: number;
  details: unknown;

  constructor(status: number, code: string, message: string, details?: unknown) {
    super(message);
    this.status = status;
    this.code = code;
    this.details = details;
  }
}

/** Thrown when the server cannot be reached at all (outage banner case). */
export class ApiUnreachable extends Error {
  constructor(baseUrl: string, cause: unknown) {
    super(`API at ${baseUrl} is unreachable: ${String(cause)}`);
  }
}

export interface ClientConfig {
  baseUrl: string;
  token?: string;
}

export class WorkbenchClient {
  readonly baseUrl: string;
  private token: string | undefined;

  constructor(cfg: ClientConfig) {
    this.baseUrl = cfg.baseUrl.replace(/\/+$/, '');
    this.token = cfg.token || undefined;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers['content-type'] = 'application/json';
    if (this.token) headers['authorization'] = `Bearer ${this.token}`;
    let resp: Response;
    try {
      resp = await fetch(this.baseUrl + path, {
        method,
        headers,
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiUnreachable(this.baseUrl, err);
    }
    if (!resp.ok) {
      let code = 'internal';
      let message = `${resp.status} ${resp.statusText}`;
      let details: unknown;
      try {
        const doc = await resp.json();
        if (doc && doc.error) {
          code = doc.error.code ?? code;
          message = doc.error.message ?? message;
          details = doc.error.details;
        }
      } catch {
        // non-envelope body; keep the status-line message
      }
      throw new ApiError(resp.status, code, message, details);
    }
    return (await resp.json()) as T;
  }

  // -- sessions --------------------------------------------------------------

  createSession(
    problem: ProblemIn,
    modelId?: string,
    sessionId?: string,
  ): Promise<SessionStub> {
    return this.request('POST', '/sessions', {
      problem,
      model_id: modelId ?? null,
      session_id: sessionId ?? null,
    });
  }

  getSession(id: string): Promise<SessionView> {
    return this.request('GET', `/sessions/${id}`);
  }

  runStep1(id: string, version: number): Promise<SessionView> {
    return this.request('POST', `/sessions/${id}/step1`, { version });
  }

  runStep2(id: string, version: number, ordinals: number[]): Promise<SessionView> {
    return this.request('POST', `/sessions/${id}/step2`, {
      version,
      selected_ordinals: ordinals,
    });
  }

  runStep3(id: string, version: number, numbers: number[]): Promise<SessionView> {
    return this.request('POST', `/sessions/${id}/step3`, {
      version,
      selected_numbers: numbers,
    });
  }

  choosePrinciples(
    id: string,
    version: number,
    chosenIndex: number,
    selected: number[] | null,
  ): Promise<SessionView> {
    return this.request('POST', `/sessions/${id}/principles`, {
      version,
      chosen_index: chosenIndex,
      selected_principles: selected,
    });
  }

  runStep4(
    id: string,
    version: number,
    principle: number,
    count?: number,
  ): Promise<SessionView> {
    return this.request('POST', `/sessions/${id}/step4`, {
      version,
      principle,
      count: count ?? null,
    });
  }

  // -- knowledge --------------------------------------------------------------

  parameters(): Promise<ParameterInfo[]> {
    return this.request('GET', '/knowledge/parameters');
  }

  principles(): Promise<PrincipleInfo[]> {
    return this.request('GET', '/knowledge/principles');
  }

  matrixCell(improving: number, worsening: number): Promise<MatrixCell> {
    return this.request(
      'GET',
      `/knowledge/matrix?improving=${improving}&worsening=${worsening}`,
    );
  }

  // -- cases and reports -------------------------------------------------------

  cases(): Promise<CollectionOut> {
    return this.request('GET', '/cases');
  }

  reports(): Promise<ReportSummary[]> {
    return this.request('GET', '/eval/reports');
  }

  async report(id: string): Promise<ReportDoc> {
    const doc = await this.request<{ report: ReportDoc }>(
      'GET',
      `/eval/reports/${id}`,
    );
    return doc.report;
  }

  job(id: string): Promise<JobOut> {
    return this.request('GET', `/eval/jobs/${id}`);
  }

  project(keywords: KeywordPair[], method = 'pca'): Promise<ProjectionOut> {
    return this.request('POST', '/projection', { keywords, method });
  }
}
