// DOM rendering: everything reads from the Workbench state and paints;
// no state lives in the DOM.

import { TreeNode, WireReport } from "./api.js";
import { latexToHtml } from "./latex.js";
import { Workbench, groupCases, optionsDistinct } from "./state.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, cls?: string, html?: string): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) {
    node.className = cls;
  }
  if (html !== undefined) {
    node.innerHTML = html;
  }
  return node;
}

function renderTreeWithGoals(wb: Workbench, root: TreeNode): HTMLElement {
  const walk = (node: TreeNode): HTMLElement => {
    const box = el("div", "node");
    if (node.children.length) {
      const prem = el("div", "premises");
      for (const c of node.children) {
        prem.appendChild(walk(c));
      }
      box.appendChild(prem);
      const line = el("div", "infer-line");
      line.appendChild(el("span", "rule-label",
                          node.rule ? latexToHtml(node.rule) : ""));
      box.appendChild(line);
    } else if (node.status === "open") {
      box.appendChild(el("div", "vdots", "⋮"));
    } else {
      const line = el("div", "infer-line");
      line.appendChild(el("span", "rule-label",
                          node.rule ? latexToHtml(node.rule) : ""));
      box.appendChild(line);
    }
    const cls = node.status === "open" ? "sequent open-goal" : "sequent";
    const seq = el("div", cls, latexToHtml(node.sequent));
    const gid = node.goalId;
    if (node.status === "open" && gid) {
      seq.dataset.goal = gid;
      if (gid === wb.state.selectedGoal) {
        seq.classList.add("selected");
      }
      seq.addEventListener("click", () => {
        wb.selectGoal(gid);
        paint(wb);
      });
    }
    box.appendChild(seq);
    return box;
  };
  return walk(root);
}

function renderReport(report: WireReport): HTMLElement {
  const box = el("div", "report");
  const s = report.summary;
  box.appendChild(el(
    "h3", undefined,
    `${report.property} on ${report.calculus}: ` +
    `<span class="status-proved">${s.proved} proved</span>, ` +
    `<span class="status-unknown">${s.unknown} unknown</span>, ` +
    `<span class="status-failed">${s.failed} failed</span>`));
  for (const note of report.notes) {
    box.appendChild(el("div", "report-note", latexToHtml(note)));
  }
  if (!report.cases.length) {
    box.appendChild(el("div", "placeholder", "no cases"));
    return box;
  }
  for (const group of groupCases(report)) {
    if (!group.cases.length) {
      continue;
    }
    for (const c of group.cases) {
      const details = el("details", `case status-${c.status}`);
      const summary = el("summary", undefined,
                         `[${c.status}] ${c.id}`);
      details.appendChild(summary);
      details.appendChild(el("div", "case-desc", latexToHtml(c.description)));
      for (const note of c.notes) {
        details.appendChild(el("div", "case-note", note));
      }
      for (const w of c.witnesses) {
        if (w.tree) {
          details.appendChild(renderStaticTree(w.tree));
        }
        if (w.before) {
          details.appendChild(el("div", "witness-label", "before"));
          details.appendChild(renderStaticTree(w.before));
        }
        if (w.after) {
          details.appendChild(el("div", "witness-label", "after"));
          details.appendChild(renderStaticTree(w.after));
        }
      }
      box.appendChild(details);
    }
  }
  return box;
}

function renderStaticTree(node: TreeNode): HTMLElement {
  const box = el("div", "node");
  if (node.children.length) {
    const prem = el("div", "premises");
    for (const c of node.children) {
      prem.appendChild(renderStaticTree(c));
    }
    box.appendChild(prem);
  } else if (node.status === "open") {
    box.appendChild(el("div", "vdots", "⋮"));
  }
  const line = el("div", "infer-line");
  line.appendChild(el("span", "rule-label",
                      node.rule ? latexToHtml(node.rule) : ""));
  box.appendChild(line);
  box.appendChild(el("div", "sequent", latexToHtml(node.sequent)));
  return box;
}

export function paint(wb: Workbench): void {
  const st = wb.state;

  const rules = document.getElementById("rules")!;
  rules.innerHTML = "";
  if (st.calculus) {
    for (const r of st.calculus.rules) {
      const btn = el("button", `rule kind-${r.kind}`);
      btn.innerHTML = latexToHtml(r.latex);
      btn.title = r.name;
      btn.addEventListener("click", async () => {
        await wb.clickRule(r.name);
        paint(wb);
      });
      rules.appendChild(btn);
    }
  }

  const proof = document.getElementById("proof")!;
  proof.innerHTML = "";
  if (st.session) {
    proof.appendChild(renderTreeWithGoals(wb, st.session.tree));
    const status = el("div", "session-status",
                      st.session.complete
                        ? "proof complete ✓"
                        : `${st.session.goals.length} open goal(s)`);
    proof.appendChild(status);
  }

  const chooser = document.getElementById("chooser")!;
  chooser.innerHTML = "";
  if (st.pendingChoice) {
    if (!optionsDistinct(st.pendingChoice.options)) {
      throw new Error("duplicate chooser options from server");
    }
    const dialog = el("div", "chooser-dialog");
    dialog.appendChild(el(
      "h3", undefined,
      `${st.pendingChoice.rule} applies in` +
      ` ${st.pendingChoice.options.length} ways`));
    for (const opt of st.pendingChoice.options) {
      const btn = el("button", "option");
      btn.innerHTML = opt.premises.length
        ? opt.premises.map(latexToHtml).join("<span class=sep> ∥ </span>")
        : "<i>closes the goal</i>";
      btn.addEventListener("click", async () => {
        await wb.choose(opt.index);
        paint(wb);
      });
      dialog.appendChild(btn);
    }
    const cancel = el("button", "cancel", "cancel");
    cancel.addEventListener("click", () => {
      wb.cancelChoice();
      paint(wb);
    });
    dialog.appendChild(cancel);
    chooser.appendChild(dialog);
  }

  const notice = document.getElementById("notice")!;
  notice.textContent = st.notice ?? "";
  const diags = document.getElementById("diagnostics")!;
  diags.textContent = st.diagnostics
    ? JSON.stringify(st.diagnostics, null, 2) : "";

  const reportBox = document.getElementById("report")!;
  reportBox.innerHTML = "";
  if (st.report) {
    reportBox.appendChild(renderReport(st.report));
  }
}
