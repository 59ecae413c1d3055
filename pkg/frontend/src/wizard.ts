/**
 * The sealing wizard: one panel per workflow step, gated by the server's
 * phase cursor.  Every button calls the corresponding service endpoint and
 * re-renders from the returned job status; failures are shown inline with
 * the failing rule identifier when the service names one.
 */

import { ApiError, PortalApi, fromBase64, toBase64 } from "./api.js";
import { WIZARD_STEPS, WorkflowViewState } from "./state.js";

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

function labelled(labelText: string, control: HTMLElement): HTMLElement {
  const wrapper = element("div", { class: "field" });
  const label = element("label", {}, labelText);
  label.appendChild(control);
  wrapper.appendChild(label);
  return wrapper;
}

async function fileBytes(input: HTMLInputElement): Promise<Uint8Array | null> {
  const file = input.files?.[0];
  if (!file) {
    return null;
  }
  return new Uint8Array(await file.arrayBuffer());
}

export function renderWizard(
  root: HTMLElement,
  api: PortalApi,
  store: WorkflowViewState,
): void {
  const container = element("div", { class: "wizard" });
  const nav = element("nav", { class: "wizard-nav" });
  const error = element("p", { class: "wizard-error", hidden: "" });
  const content = element("section", { class: "wizard-content" });
  container.append(nav, error, content);
  root.appendChild(container);

  async function call(action: () => Promise<void>): Promise<void> {
    try {
      await action();
    } catch (failure) {
      const message =
        failure instanceof ApiError ? failure.display() : String(failure);
      store.set({ error: message });
    }
  }

  // -- step panels --------------------------------------------------------

  function renderClassification(panel: HTMLElement): void {
    const state = store.get();
    if (!state.jobId) {
      const picker = element("input", { type: "file", id: "source-file", accept: ".sdoc,.xml" });
      const open = element("button", { id: "open-job" }, "Open sealing job");
      open.addEventListener("click", () =>
        call(async () => {
          const bytes = await fileBytes(picker);
          if (!bytes) {
            store.set({ error: "choose a source document (.sdoc) first" });
            return;
          }
          store.applyStatus(await api.createJob(bytes));
        }),
      );
      panel.append(
        labelled("Source document (.sdoc)", picker),
        open,
      );
      return;
    }

    const source = state.source!;
    const preview = element("dl", { class: "source-preview" });
    for (const [term, value] of [
      ["Format", source.format],
      ["Size", `${source.size} bytes`],
      ["Content id", source.contentId],
    ]) {
      preview.appendChild(element("dt", {}, term!));
      preview.appendChild(element("dd", {}, value!));
    }

    const form = state.classification;
    const sourceLang = element("input", { id: "source-lang", value: form.sourceLanguage, placeholder: "fr" });
    const targetLang = element("input", { id: "target-lang", value: form.targetLanguage, placeholder: "de" });
    const targetFormat = element("input", { id: "target-format", value: form.targetFormat });
    const translitScript = element("input", { id: "translit-script", placeholder: "Cyrillic" });
    const translitStandard = element("input", { id: "translit-standard", placeholder: "ISO 9" });
    const calendar = element("input", { id: "calendar", value: form.calendarConversion ?? "", placeholder: "buddhist-gregorian-th" });

    const submit = element("button", { id: "classify-submit" }, "Classify");
    submit.addEventListener("click", () =>
      call(async () => {
        const transliterations = [...form.transliterations];
        if (translitScript.value && translitStandard.value) {
          transliterations.push({
            script: translitScript.value,
            standard: translitStandard.value,
          });
        }
        const classification = {
          sourceLanguage: sourceLang.value,
          targetLanguage: targetLang.value,
          targetFormat: targetFormat.value,
          transliterations,
          calendarConversion: calendar.value || null,
        };
        store.set({ classification });
        store.applyStatus(
          await api.classify(state.jobId!, {
            ...classification,
            calendarConversion: classification.calendarConversion,
          }),
        );
      }),
    );

    panel.append(
      preview,
      labelled("Source language", sourceLang),
      labelled("Target language", targetLang),
      labelled("Target format", targetFormat),
      labelled("Transliteration script", translitScript),
      labelled("Transliteration standard", translitStandard),
      labelled("Calendar conversion", calendar),
      submit,
    );
  }

  function renderSignaturePanel(panel: HTMLElement): void {
    const { signatures } = store.get();
    const box = element("div", { class: "signature-panel" });
    box.appendChild(element("h3", {}, "Signatures on the original document"));
    if (signatures.length === 0) {
      box.appendChild(element("p", { class: "no-signatures" }, "The source document carries no signatures."));
    }
    for (const entry of signatures) {
      const row = element("div", { class: `signature signature-${entry.result}` });
      row.appendChild(
        element("p", {}, `${entry.signer} — ${entry.result} (signed ${entry.signingTime})`),
      );
      if (entry.authority) {
        row.appendChild(element("p", {}, `authority: ${entry.authority}`));
      }
      const certs = element("ul", { class: "certificates" });
      for (const cert of entry.certificates) {
        certs.appendChild(
          element(
            "li",
            { class: `certificate-status-${cert.status}` },
            `${cert.subject} (serial ${cert.serial}, ${cert.status})`,
          ),
        );
      }
      row.appendChild(certs);
      box.appendChild(row);
    }
    panel.appendChild(box);
  }

  function renderConversion(panel: HTMLElement): void {
    renderSignaturePanel(panel);
    const picker = element("input", { type: "file", id: "target-file" });
    const format = element("input", {
      id: "upload-format",
      value: store.get().classification.targetFormat,
    });
    const upload = element("button", { id: "target-upload" }, "Upload translation");
    upload.addEventListener("click", () =>
      call(async () => {
        const bytes = await fileBytes(picker);
        if (!bytes) {
          store.set({ error: "choose the translated file first" });
          return;
        }
        store.applyStatus(
          await api.uploadTarget(store.get().jobId!, bytes, format.value),
        );
      }),
    );
    panel.append(
      labelled("Translated document", picker),
      labelled("Format", format),
      upload,
    );
  }

  function renderAssay(panel: HTMLElement): void {
    const confirm = element("input", { type: "checkbox", id: "assay-confirm" });
    const submit = element("button", { id: "assay-submit" }, "Record review");
    submit.addEventListener("click", () =>
      call(async () => {
        store.applyStatus(
          await api.confirmAssay(store.get().jobId!, confirm.checked),
        );
      }),
    );
    panel.append(
      labelled(
        "I have compared the translation against the source and confirm it is complete.",
        confirm,
      ),
      submit,
    );
  }

  function renderAnnotate(panel: HTMLElement): void {
    const form = store.get().annotation;
    const defects = element("textarea", { id: "defects", placeholder: "one defect per line" });
    defects.value = form.defects.join("\n");
    const comments = element("textarea", { id: "comments" });
    comments.value = form.comments;
    const attestation = element("input", { id: "attestation", value: form.attestation });
    const location = element("input", { id: "location", value: form.location });
    const submit = element("button", { id: "seal-submit" }, "Seal the translation");
    submit.addEventListener("click", () =>
      call(async () => {
        const annotation = {
          defects: defects.value.split("\n").map((line) => line.trim()).filter(Boolean),
          comments: comments.value,
          attestation: attestation.value,
          location: location.value,
        };
        store.set({ annotation });
        const status = await api.seal(store.get().jobId!, {
          attestation: annotation.attestation,
          location: annotation.location,
          defects: annotation.defects,
          comments: annotation.comments || null,
        });
        const sealedBytes = status.tseal ? fromBase64(status.tseal) : null;
        store.applyStatus(status);
        store.set({ sealedBytes });
      }),
    );
    panel.append(
      labelled("Defects in the source", defects),
      labelled("Comments", comments),
      labelled("Accuracy attestation", attestation),
      labelled("Place of sealing", location),
      submit,
    );
  }

  function renderDownload(panel: HTMLElement): void {
    const bytes = store.get().sealedBytes;
    if (!bytes) {
      panel.appendChild(element("p", {}, "The seal is on the server; fetching…"));
      void call(async () => {
        const fetched = await api.jobResult(store.get().jobId!);
        store.set({ sealedBytes: fetched });
      });
      return;
    }
    const link = element(
      "a",
      {
        id: "download-link",
        download: "translated.tseal",
        href: "data:application/xml;base64," + toBase64(bytes),
      },
      "Download sealed translation",
    );
    const again = element("button", { id: "new-job" }, "Start another job");
    again.addEventListener("click", () => store.reset());
    panel.append(link, again);
  }

  const renderers = [
    renderClassification,
    renderConversion,
    renderAssay,
    renderAnnotate,
    renderDownload,
  ];

  function sync(): void {
    const state = store.get();
    const current = store.stepIndex();

    nav.innerHTML = "";
    WIZARD_STEPS.forEach((step, index) => {
      const button = element("button", {}, `${index + 1}. ${step.title}`);
      button.disabled = !store.canShow(index);
      if (index === current) {
        button.classList.add("active");
      }
      nav.appendChild(button);
    });

    if (state.error) {
      error.hidden = false;
      error.textContent = state.error;
    } else {
      error.hidden = true;
      error.textContent = "";
    }

    content.innerHTML = "";
    renderers[current]!(content);
  }

  sync();
  store.subscribe(sync);
}
