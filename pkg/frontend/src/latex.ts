// Display-only conversion of the server's LaTeX strings to HTML.
// This is a lexical symbol substitution: no formula is ever rebuilt or
// rearranged on the client.

const SYMBOLS: Record<string, string> = {
  vdash: "⊢",
  cdot: "·",
  wedge: "∧",
  vee: "∨",
  rightarrow: "→",
  neg: "¬",
  otimes: "⊗",
  oplus: "⊕",
  bindnasrepma: "⅋",
  binampersand: "&amp;",
  top: "⊤",
  bot: "⊥",
  square: "□",
  Gamma: "Γ",
  Delta: "Δ",
  Xi: "Ξ",
  vdots: "⋮",
  mid: "∣",
  Vdash: "⊩",
};

function escapeHtml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

interface Frame {
  html: string;
  wrap: (inner: string) => string;
}

// Renders the macro subset the server emits: symbol macros, styled
// groups (\mathsf, \mathit, \mathbf), sub/superscripts, braces.
export function latexToHtml(src: string): string {
  const stack: Frame[] = [{ html: "", wrap: (x) => x }];
  let i = 0;
  const top = () => stack[stack.length - 1];
  const emit = (s: string) => { top().html += s; };

  const readGroupless = (): string => {
    // single token argument for ^ and _ when not braced
    const ch = src[i];
    if (ch === "\\") {
      const m = /^\\([A-Za-z]+)/.exec(src.slice(i));
      if (m) {
        i += m[0].length;
        return SYMBOLS[m[1]] ?? escapeHtml(m[1]);
      }
    }
    i += 1;
    return escapeHtml(ch);
  };

  while (i < src.length) {
    const ch = src[i];
    if (ch === "\\") {
      const m = /^\\([A-Za-z]+)/.exec(src.slice(i));
      if (!m) {
        emit(escapeHtml(src[i + 1] ?? ""));
        i += 2;
        continue;
      }
      const name = m[1];
      i += m[0].length;
      if (name === "mathsf" || name === "mathit" || name === "mathbf") {
        const cls = { mathsf: "msf", mathit: "mit", mathbf: "mbf" }[name];
        if (src[i] === "{") {
          i += 1;
          stack.push({
            html: "",
            wrap: (inner) => `<span class="${cls}">${inner}</span>`,
          });
        }
        continue;
      }
      emit(SYMBOLS[name] ?? `<span class="unknown">\\${name}</span>`);
      continue;
    }
    if (ch === "^" || ch === "_") {
      const tag = ch === "^" ? "sup" : "sub";
      i += 1;
      if (src[i] === "{") {
        i += 1;
        stack.push({
          html: "",
          wrap: (inner) => `<${tag}>${inner}</${tag}>`,
        });
      } else {
        emit(`<${tag}>${readGroupless()}</${tag}>`);
      }
      continue;
    }
    if (ch === "{") {
      i += 1;
      stack.push({ html: "", wrap: (x) => x });
      continue;
    }
    if (ch === "}") {
      i += 1;
      if (stack.length > 1) {
        const frame = stack.pop()!;
        emit(frame.wrap(frame.html));
      }
      continue;
    }
    emit(escapeHtml(ch));
    i += 1;
  }
  while (stack.length > 1) {
    const frame = stack.pop()!;
    emit(frame.wrap(frame.html));
  }
  return stack[0].html;
}
