import { HttpApi } from "./api.js";
import { Workbench } from "./state.js";
import { paint } from "./ui.js";

const DEFAULT_LK = `calculus LK
zone L antecedent weakening contraction
zone R succedent weakening contraction
conn and 2 "#1 \\wedge #2" prec 40
conn or 2 "#1 \\vee #2" prec 30
conn imp 2 "#1 \\rightarrow #2" prec 20
conn not 1 "\\neg #1" prec 70
axiom init : (G, p |- D, p)
rule andR : (G |- D, A) (G |- D, B) => (G |- D, A and B)
rule andL1 : (G, A |- D) => (G, A and B |- D)
rule andL2 : (G, B |- D) => (G, A and B |- D)
rule orR1 : (G |- D, A) => (G |- D, A or B)
rule orR2 : (G |- D, B) => (G |- D, A or B)
rule orL : (G, A |- D) (G, B |- D) => (G, A or B |- D)
rule impR : (G, A |- D, B) => (G |- D, A imp B)
rule impL : (G1 |- D1, A) (G2, B |- D2) => (G1, G2, A imp B |- D1, D2)
rule notR : (G, A |- D) => (G |- D, not A)
rule notL : (G |- D, A) => (G, not A |- D)
cut cut : (G1 |- D1, A) (G2, A |- D2) => (G1, G2 |- D1, D2)
identity init
`;

function base(): string {
  const here = window.location;
  if (here.protocol.startsWith("http") && here.port !== "") {
    return "";
  }
  return "http://127.0.0.1:8037";
}

window.addEventListener("DOMContentLoaded", () => {
  const wb = new Workbench(new HttpApi(base()));
  const source = document.getElementById("source") as HTMLTextAreaElement;
  source.value = DEFAULT_LK;

  document.getElementById("load")!.addEventListener("click", async () => {
    await wb.loadCalculus(source.value);
    paint(wb);
  });

  const goalInput = document.getElementById("goal") as HTMLInputElement;
  document.getElementById("start")!.addEventListener("click", async () => {
    await wb.startSession(goalInput.value);
    paint(wb);
  });

  document.getElementById("undo")!.addEventListener("click", async () => {
    await wb.undo();
    paint(wb);
  });

  const propSel = document.getElementById("property") as HTMLSelectElement;
  const ruleInput = document.getElementById(
    "check-rule") as HTMLInputElement;
  document.getElementById("run-check")!.addEventListener(
    "click", async () => {
      const params: Record<string, unknown> = {};
      const prop = propSel.value;
      if (prop === "invert" && ruleInput.value) {
        params.rule = ruleInput.value;
      }
      if (prop === "permute" && ruleInput.value.includes("/")) {
        const [up, down] = ruleInput.value.split("/");
        params.ruleUp = up;
        params.ruleDown = down;
      }
      await wb.runCheck(prop, params);
      paint(wb);
    });

  paint(wb);
});
