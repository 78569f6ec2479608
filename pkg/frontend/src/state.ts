// The view model: a thin, testable layer between the API and the DOM.
// The server is the single source of truth; every mutation replaces the
// local session view with the server's response, and the UI re-renders
// from this state only.

import {
  Api,
  ApiError,
  ApplicationOption,
  CalculusView,
  SessionView,
  WireReport,
} from "./api.js";

export interface PendingChoice {
  goalId: string;
  rule: string;
  options: ApplicationOption[];
}

export interface ViewState {
  calculus: CalculusView | null;
  session: SessionView | null;
  selectedGoal: string | null;
  pendingChoice: PendingChoice | null;
  report: WireReport | null;
  notice: string | null;
  diagnostics: unknown | null;
}

export function initialState(): ViewState {
  return {
    calculus: null,
    session: null,
    selectedGoal: null,
    pendingChoice: null,
    report: null,
    notice: null,
    diagnostics: null,
  };
}

export class Workbench {
  state: ViewState;

  constructor(private api: Api, state?: ViewState) {
    this.state = state ?? initialState();
  }

  private setSession(view: SessionView): void {
    this.state.session = view;
    this.state.pendingChoice = null;
    if (!view.goals.some((g) => g.id === this.state.selectedGoal)) {
      this.state.selectedGoal = view.goals.length === 1
        ? view.goals[0].id : null;
    }
  }

  private async resync(): Promise<void> {
    if (this.state.session) {
      this.setSession(await this.api.getSession(this.state.session.id));
    }
  }

  async loadCalculus(text: string): Promise<void> {
    this.state.notice = null;
    this.state.diagnostics = null;
    try {
      this.state.calculus = await this.api.postCalculus(text);
      this.state.session = null;
      this.state.selectedGoal = null;
      this.state.pendingChoice = null;
      this.state.report = null;
    } catch (e) {
      if (e instanceof ApiError && e.status === 422) {
        this.state.diagnostics = e.detail;
        return;
      }
      throw e;
    }
  }

  async startSession(goal: string): Promise<void> {
    if (!this.state.calculus) {
      this.state.notice = "load a calculus first";
      return;
    }
    this.state.notice = null;
    this.state.diagnostics = null;
    try {
      const view = await this.api.newSession(this.state.calculus.id, goal);
      this.state.selectedGoal = null;
      this.setSession(view);
    } catch (e) {
      if (e instanceof ApiError && e.status === 422) {
        this.state.diagnostics = e.detail;
        return;
      }
      throw e;
    }
  }

  selectGoal(goalId: string): void {
    this.state.selectedGoal = goalId;
    this.state.pendingChoice = null;
  }

  /** Click flow: with a goal selected, clicking a rule either applies
   * the unique option, opens a chooser for several, or reports that the
   * rule does not apply. */
  async clickRule(rule: string): Promise<void> {
    const session = this.state.session;
    if (!session) {
      return;
    }
    const goalId = this.state.selectedGoal
      ?? (session.goals.length === 1 ? session.goals[0].id : null);
    if (goalId === null) {
      this.state.notice = "select a goal first";
      return;
    }
    this.state.notice = null;
    let options: ApplicationOption[];
    try {
      options = await this.api.applications(session.id, goalId, rule);
    } catch (e) {
      if (e instanceof ApiError && (e.status === 409 || e.status === 422)) {
        this.state.notice = `server refused: ${e.status}`;
        await this.resync();
        return;
      }
      throw e;
    }
    if (options.length === 0) {
      this.state.notice = `rule ${rule} does not apply`;
      return;
    }
    if (options.length === 1) {
      await this.applyOption(goalId, options[0].index);
      return;
    }
    this.state.pendingChoice = { goalId, rule, options };
  }

  async applyOption(goalId: string, index: number): Promise<void> {
    const session = this.state.session;
    if (!session) {
      return;
    }
    try {
      this.setSession(await this.api.apply(session.id, goalId, index));
    } catch (e) {
      if (e instanceof ApiError && (e.status === 409 || e.status === 422)) {
        this.state.notice = `server refused: ${e.status}`;
        await this.resync();
        return;
      }
      throw e;
    }
  }

  async choose(index: number): Promise<void> {
    const pending = this.state.pendingChoice;
    if (!pending) {
      return;
    }
    await this.applyOption(pending.goalId, index);
  }

  cancelChoice(): void {
    this.state.pendingChoice = null;
  }

  async undo(): Promise<void> {
    const session = this.state.session;
    if (!session) {
      return;
    }
    this.setSession(await this.api.undo(session.id));
  }

  async runCheck(property: string,
                 params: Record<string, unknown>): Promise<void> {
    if (!this.state.calculus) {
      this.state.notice = "load a calculus first";
      return;
    }
    this.state.notice = null;
    this.state.report = await this.api.runCheck(
      this.state.calculus.id, property, params);
  }
}

/** Report cases grouped for the browser: proved, then unknown, then
 * failed, preserving server order within each group. */
export function groupCases(report: WireReport) {
  const order = ["proved", "unknown", "failed"] as const;
  return order.map((status) => ({
    status,
    cases: report.cases.filter((c) => c.status === status),
  }));
}

/** Guard surfaced by the chooser: the server never sends two identical
 * options, so option bodies must be pairwise distinct. */
export function optionsDistinct(options: ApplicationOption[]): boolean {
  const seen = new Set<string>();
  for (const o of options) {
    const key = `${o.rule}::${JSON.stringify(o.premises)}`;
    if (seen.has(key)) {
      return false;
    }
    seen.add(key);
  }
  return true;
}
