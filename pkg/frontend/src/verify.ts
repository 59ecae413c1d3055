/**
 * Seal verification view: upload a .tseal file, send it to the service,
 * render the four verification gates and the per-rule outcomes.
 *
 * All judgement comes from the server.  The only client-side reading of
 * the file is a display convenience: the embedded source and the target
 * are pulled out verbatim so the inspector can compare the two documents
 * side by side.
 */

import { ApiError, PortalApi, fromBase64, type VerificationReport } from "./api.js";

function element<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [name, value] of Object.entries(attrs)) {
    node.setAttribute(name, value);
  }
  if (text) {
    node.textContent = text;
  }
  return node;
}

/** First element text between `<tag>` and `</tag>`; display use only. */
function extractElementText(xml: string, tag: string): string | null {
  const match = xml.match(new RegExp(`<${tag}>([^<]*)</${tag}>`));
  return match ? match[1]! : null;
}

function decodeForDisplay(base64Text: string, format: string): string {
  try {
    const bytes = fromBase64(base64Text);
    if (format.startsWith("text/plain")) {
      return new TextDecoder().decode(bytes);
    }
    return `(${format}, ${bytes.length} bytes)`;
  } catch {
    return "(not decodable)";
  }
}

function gateRow(name: string, ok: boolean, detail: string): HTMLElement {
  const row = element("li", {
    class: `gate gate-${name} ${ok ? "gate-pass" : "gate-fail"}`,
  });
  row.appendChild(element("strong", {}, `${name}: ${ok ? "pass" : "FAIL"}`));
  if (detail) {
    row.appendChild(element("span", { class: "gate-detail" }, ` ${detail}`));
  }
  return row;
}

function renderReport(target: HTMLElement, report: VerificationReport): void {
  const banner = element(
    "p",
    {
      id: "verify-overall",
      class: report.ok ? "verdict-pass" : "verdict-fail",
    },
    report.ok ? "Seal is VALID" : "Seal is NOT VALID",
  );
  target.appendChild(banner);

  const gates = element("ul", { class: "gates" });
  gates.appendChild(
    gateRow(
      "seal-signature",
      report.sealSignature.result === "valid",
      report.sealSignature.detail,
    ),
  );
  gates.appendChild(
    gateRow("binding", report.binding.ok, report.binding.failures.join("; ")),
  );
  gates.appendChild(
    gateRow(
      "report-chain",
      report.reportChain.ok,
      report.reportChain.failures.join("; "),
    ),
  );
  const who =
    report.authorisation.role === null
      ? report.authorisation.detail
      : `${report.authorisation.role} — ${report.authorisation.authority}` +
        (report.authorisation.detail ? ` (${report.authorisation.detail})` : "");
  gates.appendChild(gateRow("authorisation", report.authorisation.ok, who));
  target.appendChild(gates);

  const facts = element("dl", { class: "seal-facts" });
  for (const [term, value] of [
    ["Sealed at", report.sealingTime],
    ["Source content id", report.sourceContentId],
    ["Target digest", report.targetDigest],
  ]) {
    facts.appendChild(element("dt", {}, term!));
    facts.appendChild(element("dd", {}, value!));
  }
  target.appendChild(facts);

  const rules = element("table", { class: "rules" });
  for (const rule of report.rules) {
    const row = element("tr", { class: `rule-${rule.outcome}` });
    row.appendChild(element("td", {}, rule.activity));
    row.appendChild(element("td", {}, rule.ruleId));
    row.appendChild(element("td", {}, rule.outcome));
    row.appendChild(element("td", {}, rule.detail));
    rules.appendChild(row);
  }
  target.appendChild(rules);
}

function renderComparison(target: HTMLElement, xml: string): void {
  const sourceFormat = extractElementText(xml, "ContentFormat") ?? "";
  const sourceContent = extractElementText(xml, "Content");
  const targetFormat = extractElementText(xml, "TargetFormat") ?? "";
  const targetContent = extractElementText(xml, "TargetContent");
  if (sourceContent === null || targetContent === null) {
    return;
  }
  const panel = element("div", { class: "comparison" });
  panel.appendChild(element("h3", {}, "Embedded documents"));
  panel.appendChild(
    element("pre", { id: "embedded-source" }, decodeForDisplay(sourceContent, sourceFormat)),
  );
  panel.appendChild(
    element("pre", { id: "embedded-target" }, decodeForDisplay(targetContent, targetFormat)),
  );
  target.appendChild(panel);
}

export function renderVerifyView(root: HTMLElement, api: PortalApi): void {
  const container = element("div", { class: "verify-view" });
  const picker = element("input", { type: "file", id: "tseal-file", accept: ".tseal,.xml" });
  const check = element("button", { id: "verify-submit" }, "Verify");
  const error = element("p", { class: "verify-error", hidden: "" });
  const result = element("div", { class: "verify-result" });
  container.append(picker, check, error, result);
  root.appendChild(container);

  check.addEventListener("click", async () => {
    error.hidden = true;
    error.textContent = "";
    result.innerHTML = "";
    const file = picker.files?.[0];
    if (!file) {
      error.hidden = false;
      error.textContent = "choose a .tseal file first";
      return;
    }
    const bytes = new Uint8Array(await file.arrayBuffer());
    try {
      const report = await api.verifySeal(bytes);
      renderReport(result, report);
      renderComparison(result, new TextDecoder().decode(bytes));
    } catch (failure) {
      error.hidden = false;
      // parse errors and other service messages are shown verbatim
      error.textContent =
        failure instanceof ApiError ? failure.display() : String(failure);
    }
  });
}
