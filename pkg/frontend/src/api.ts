// Typed client for the sequitur /v1 JSON API.  The frontend never
// manipulates formulas itself: everything displayable arrives as LaTeX
// strings or structured trees from the server.

export interface ZoneInfo {
  name: string;
  side: string;
  weakening: boolean;
  contraction: boolean;
}

export interface RuleInfo {
  name: string;
  kind: string;
  premises: number;
  latex: string;
}

export interface CalculusView {
  id: string;
  name: string;
  zones: ZoneInfo[];
  rules: RuleInfo[];
  identityRule: string;
}

export interface TreeNode {
  sequent: string;
  rule: string | null;
  status: string;
  accepted: boolean;
  children: TreeNode[];
  goalId?: string | null;
}

export interface GoalInfo {
  id: string;
  latex: string;
}

export interface SessionView {
  id: string;
  tree: TreeNode;
  proofLatex: string;
  goals: GoalInfo[];
  complete: boolean;
  historyDepth: number;
}

export interface ApplicationOption {
  index: number;
  rule: string;
  premises: string[];
}

export interface WitnessView {
  kind: string;
  tree?: TreeNode;
  latex?: string;
  before?: TreeNode;
  beforeLatex?: string;
  after?: TreeNode;
  afterLatex?: string;
}

export interface WireCase {
  id: string;
  description: string;
  status: string;
  notes: string[];
  witnesses: WitnessView[];
}

export interface WireReport {
  property: string;
  calculus: string;
  parameters: Record<string, string>;
  summary: { proved: number; failed: number; unknown: number };
  notes: string[];
  cases: WireCase[];
}

export class ApiError extends Error {
  constructor(public status: number, public detail: unknown) {
    super(`HTTP ${status}: ${JSON.stringify(detail)}`);
  }
}

export interface Api {
  postCalculus(text: string): Promise<CalculusView>;
  newSession(calculusId: string, goal: string): Promise<SessionView>;
  getSession(id: string): Promise<SessionView>;
  applications(sessionId: string, goalId: string,
               rule?: string): Promise<ApplicationOption[]>;
  apply(sessionId: string, goalId: string,
        applicationIndex: number): Promise<SessionView>;
  undo(sessionId: string): Promise<SessionView>;
  runCheck(calculusId: string, property: string,
           params: Record<string, unknown>): Promise<WireReport>;
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const res = await fetch(url, init);
  if (!res.ok) {
    let detail: unknown;
    try {
      detail = (await res.json()).detail;
    } catch {
      detail = res.statusText;
    }
    throw new ApiError(res.status, detail);
  }
  return res.json() as Promise<T>;
}

function post(body: unknown): RequestInit {
  return {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  };
}

export class HttpApi implements Api {
  constructor(private base: string) {}

  postCalculus(text: string): Promise<CalculusView> {
    return request(`${this.base}/v1/calculi`, post({ text }));
  }

  newSession(calculusId: string, goal: string): Promise<SessionView> {
    return request(`${this.base}/v1/sessions`, post({ calculusId, goal }));
  }

  getSession(id: string): Promise<SessionView> {
    return request(`${this.base}/v1/sessions/${id}`);
  }

  applications(sessionId: string, goalId: string,
               rule?: string): Promise<ApplicationOption[]> {
    const q = rule ? `?rule=${encodeURIComponent(rule)}` : "";
    return request(
      `${this.base}/v1/sessions/${sessionId}/goals/${goalId}/applications${q}`);
  }

  apply(sessionId: string, goalId: string,
        applicationIndex: number): Promise<SessionView> {
    return request(`${this.base}/v1/sessions/${sessionId}/apply`,
                   post({ goalId, applicationIndex }));
  }

  undo(sessionId: string): Promise<SessionView> {
    return request(`${this.base}/v1/sessions/${sessionId}/undo`,
                   post({}));
  }

  runCheck(calculusId: string, property: string,
           params: Record<string, unknown>): Promise<WireReport> {
    return request(`${this.base}/v1/calculi/${calculusId}/checks`,
                   post({ property, params }));
  }
}
