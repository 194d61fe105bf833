// Client-side LaTeX balance check, mirroring the server's rule for rule.
// Both sides are pinned to the shared vectors in fixtures/balance_vectors.json:
// this function must accept a string exactly when the server accepts it, and
// produce the same error message when it does not.

export function checkBalance(text: string): string | null {
  let depth = 0;
  let inline = false;
  let display = false;
  let i = 0;
  const n = text.length;
  while (i < n) {
    const ch = text[i];
    if (ch === "\\") {
      // An escape consumes the next character, even a brace or dollar.
      i += 2;
      continue;
    }
    if (ch === "{") {
      depth += 1;
    } else if (ch === "}") {
      depth -= 1;
      if (depth < 0) {
        return `unmatched '}' at offset ${i}`;
      }
    } else if (ch === "$") {
      if (i + 1 < n && text[i + 1] === "$" && !inline) {
        display = !display;
        i += 2;
        continue;
      }
      inline = !inline;
    }
    i += 1;
  }
  if (depth !== 0) {
    return `${depth} unclosed '{'`;
  }
  if (inline) {
    return "unclosed '$'";
  }
  if (display) {
    return "unclosed '$$'";
  }
  return null;
}
