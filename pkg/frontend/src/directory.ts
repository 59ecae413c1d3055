/**
 * Directory views: look up a translator's public record, and (with an
 * admin token, demo only) maintain the court directory and grant or
 * revoke authorisations.
 */

import { ApiError, PortalApi } from "./api.js";

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

function showError(box: HTMLElement, failure: unknown): void {
  box.hidden = false;
  box.textContent = failure instanceof ApiError ? failure.display() : String(failure);
}

export function renderDirectory(root: HTMLElement, api: PortalApi): void {
  const container = element("div", { class: "directory-view" });
  const error = element("p", { class: "directory-error", hidden: "" });

  // -- public lookup -------------------------------------------------------

  const lookupName = element("input", { id: "lookup-name", placeholder: "translator name" });
  const lookupButton = element("button", { id: "lookup-submit" }, "Look up");
  const card = element("dl", { class: "translator-card" });

  lookupButton.addEventListener("click", async () => {
    error.hidden = true;
    card.innerHTML = "";
    try {
      const info = await api.findTranslator(lookupName.value);
      const rows: [string, string][] = [
        ["Name", info.name],
        ["Status", info.authorised ? "authorised" : "pending"],
        ["Role", info.role ?? "—"],
        ["Authority", info.authority ?? "—"],
        ["Language pairs", info.languagePairs.join(", ") || "—"],
        ["Certificate serial", info.certificateSerial],
      ];
      for (const [term, value] of rows) {
        card.appendChild(element("dt", {}, term));
        card.appendChild(element("dd", { class: `card-${term.toLowerCase().replace(/ /g, "-")}` }, value));
      }
    } catch (failure) {
      showError(error, failure);
    }
  });

  // -- admin: court directory (demo) ------------------------------------------

  const adminToken = element("input", { id: "admin-token", type: "password", placeholder: "admin token (kept in memory)" });
  adminToken.addEventListener("change", () => {
    api.adminToken = adminToken.value || null;
  });

  const entryAuthority = element("input", { id: "entry-authority", placeholder: "District Court" });
  const entryName = element("input", { id: "entry-name", placeholder: "translator name" });
  const addEntry = element("button", { id: "entry-add" }, "Add to directory");
  const removeEntry = element("button", { id: "entry-remove" }, "Remove");
  const entries = element("ul", { class: "court-entries" });

  async function refreshEntries(): Promise<void> {
    entries.innerHTML = "";
    for (const entry of await api.courtDirectory()) {
      entries.appendChild(
        element("li", {}, `${entry.authority}: ${entry.name} (since ${entry.enteredAt})`),
      );
    }
  }

  addEntry.addEventListener("click", async () => {
    error.hidden = true;
    try {
      await api.enterCourtDirectory(entryAuthority.value, entryName.value);
      await refreshEntries();
    } catch (failure) {
      showError(error, failure);
    }
  });

  removeEntry.addEventListener("click", async () => {
    error.hidden = true;
    try {
      await api.removeFromCourtDirectory(entryAuthority.value, entryName.value);
      await refreshEntries();
    } catch (failure) {
      showError(error, failure);
    }
  });

  container.append(
    element("h3", {}, "Translator lookup"),
    lookupName,
    lookupButton,
    card,
    element("h3", {}, "Court directory (administrators)"),
    adminToken,
    entryAuthority,
    entryName,
    addEntry,
    removeEntry,
    entries,
    error,
  );
  root.appendChild(container);
}
