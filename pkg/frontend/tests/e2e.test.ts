// End-to-end: drives the view model against a live sequitur server.
// Covers the workbench acceptance path: load LK, prove p |- p and p with
// two clicks plus two init closures, undo back to the initial goal, and
// walk the four-way tensor chooser.

import { spawn, ChildProcess } from "node:child_process";
import { readFileSync } from "node:fs";
import { afterAll, beforeAll, describe, expect, test } from "vitest";

import { HttpApi } from "../dist/api.js";
import { Workbench, optionsDistinct } from "../dist/state.js";

const PORT = 8047;
const BASE = `http://127.0.0.1:${PORT}`;
let server: ChildProcess;

async function waitForServer(): Promise<void> {
  for (let i = 0; i < 100; i++) {
    try {
      const res = await fetch(BASE + "/");
      if (res.ok) {
        return;
      }
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 150));
  }
  throw new Error("server did not come up");
}

beforeAll(async () => {
  server = spawn("python3", ["-m", "sequitur.cli", "serve",
                             "--port", String(PORT)],
                 { cwd: "..", stdio: "ignore" });
  await waitForServer();
}, 30000);

afterAll(() => {
  server.kill();
});

function readCal(name: string): string {
  return readFileSync(`../src/sequitur/calculi/${name}.cal`, "utf-8");
}

describe("workbench end to end", () => {
  test("prove p |- p and p with two clicks and two inits, then undo",
       async () => {
    const wb = new Workbench(new HttpApi(BASE));
    await wb.loadCalculus(readCal("lk"));
    expect(wb.state.calculus!.rules.map((r) => r.name))
      .toContain("andR");

    await wb.startSession("p |- p and p");
    const initialTree = JSON.stringify(wb.state.session!.tree);
    expect(wb.state.session!.goals).toHaveLength(1);

    // click the goal, click andR: a single option applies immediately
    wb.selectGoal(wb.state.session!.goals[0].id);
    await wb.clickRule("andR");
    expect(wb.state.pendingChoice).toBeNull();
    expect(wb.state.session!.goals).toHaveLength(2);

    // close both premises by init (one option each: no dialog)
    for (const g of [...wb.state.session!.goals]) {
      wb.selectGoal(g.id);
      await wb.clickRule("init");
    }
    expect(wb.state.session!.complete).toBe(true);
    expect(wb.state.session!.tree.rule).toBe("andR");

    // view/server coherence after the interaction sequence
    const fetched = await new HttpApi(BASE).getSession(
      wb.state.session!.id);
    expect(JSON.stringify(fetched.tree))
      .toBe(JSON.stringify(wb.state.session!.tree));

    // undo all three steps: back to the initial goal
    await wb.undo();
    await wb.undo();
    await wb.undo();
    expect(JSON.stringify(wb.state.session!.tree)).toBe(initialTree);
    expect(wb.state.session!.goals).toHaveLength(1);

    // undo at the initial state is a no-op
    await wb.undo();
    expect(JSON.stringify(wb.state.session!.tree)).toBe(initialTree);
  }, 30000);

  test("tensor goal opens a four-way chooser; options match the server",
       async () => {
    const wb = new Workbench(new HttpApi(BASE));
    await wb.loadCalculus(readCal("ll"));
    await wb.startSession("|- ; p, q, p tensor q");
    wb.selectGoal(wb.state.session!.goals[0].id);
    await wb.clickRule("tensorR");

    const pending = wb.state.pendingChoice;
    expect(pending).not.toBeNull();
    expect(pending!.options).toHaveLength(4);
    expect(optionsDistinct(pending!.options)).toBe(true);

    // selecting each option yields exactly the premises the server
    // reported for it
    for (const opt of pending!.options) {
      const fresh = new Workbench(new HttpApi(BASE));
      await fresh.loadCalculus(readCal("ll"));
      await fresh.startSession("|- ; p, q, p tensor q");
      fresh.selectGoal(fresh.state.session!.goals[0].id);
      await fresh.clickRule("tensorR");
      await fresh.choose(opt.index);
      const got = fresh.state.session!.goals.map((g) => g.latex);
      expect(got).toEqual(opt.premises);
    }
  }, 30000);

  test("rule that does not apply reports a notice", async () => {
    const wb = new Workbench(new HttpApi(BASE));
    await wb.loadCalculus(readCal("lk"));
    await wb.startSession("p |- q");
    wb.selectGoal(wb.state.session!.goals[0].id);
    await wb.clickRule("andR");
    expect(wb.state.notice).toContain("does not apply");
  }, 30000);

  test("report browser data: LK identity all proved, LL weakening has"
       + " an amber promotion case", async () => {
    const wb = new Workbench(new HttpApi(BASE));
    await wb.loadCalculus(readCal("lk"));
    await wb.runCheck("identity", { depth: 2 });
    expect(wb.state.report!.summary.proved).toBe(4);
    expect(wb.state.report!.cases.every((c) => c.status === "proved"))
      .toBe(true);
    expect(wb.state.report!.cases[0].witnesses[0].tree).toBeTruthy();

    await wb.loadCalculus(readCal("ll"));
    await wb.runCheck("weakening", {});
    const promo = wb.state.report!.cases.find(
      (c) => c.id === "weakening/bangR/M");
    expect(promo!.status).toBe("unknown");
  }, 60000);

  test("parse errors surface as positioned diagnostics", async () => {
    const wb = new Workbench(new HttpApi(BASE));
    await wb.loadCalculus("zone L antecedent\nnonsense here\n");
    expect(wb.state.calculus).toBeNull();
    const diags = wb.state.diagnostics as Array<Record<string, unknown>>;
    expect(diags.length).toBeGreaterThan(0);
    expect(diags[0]).toHaveProperty("line");
    expect(diags[0]).toHaveProperty("col");
  }, 30000);
});
