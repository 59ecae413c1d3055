/**
 * Portal entry point: session box plus three tabs (wizard, verify,
 * directory).  The session credential is held in memory only; closing
 * the tab forgets it.
 */

import { ApiError, PortalApi } from "./api.js";
import { WorkflowViewState } from "./state.js";
import { renderWizard } from "./wizard.js";
import { renderVerifyView } from "./verify.js";
import { renderDirectory } from "./directory.js";

const TABS = ["Seal", "Verify", "Directory"] as const;

export function mountPortal(root: HTMLElement, baseUrl: string): PortalApi {
  const api = new PortalApi(baseUrl);
  const store = new WorkflowViewState();

  const session = document.createElement("div");
  session.className = "session-box";
  const name = document.createElement("input");
  name.id = "session-name";
  name.placeholder = "name";
  const credential = document.createElement("input");
  credential.id = "session-credential";
  credential.type = "password";
  credential.placeholder = "credential";
  const register = document.createElement("button");
  register.id = "session-register";
  register.textContent = "Register";
  const who = document.createElement("span");
  who.className = "session-who";
  register.addEventListener("click", async () => {
    try {
      const info = await api.register(name.value, credential.value);
      who.textContent = `signed in as ${info.name}`;
    } catch (failure) {
      who.textContent = failure instanceof ApiError ? failure.display() : String(failure);
    }
  });
  session.append(name, credential, register, who);

  const nav = document.createElement("nav");
  nav.className = "tabs";
  const panes: Record<string, HTMLElement> = {};
  for (const tab of TABS) {
    const pane = document.createElement("section");
    pane.className = `pane pane-${tab.toLowerCase()}`;
    pane.hidden = tab !== "Seal";
    panes[tab] = pane;
    const button = document.createElement("button");
    button.textContent = tab;
    button.addEventListener("click", () => {
      for (const other of TABS) {
        panes[other]!.hidden = other !== tab;
      }
    });
    nav.appendChild(button);
  }

  root.append(session, nav, panes["Seal"]!, panes["Verify"]!, panes["Directory"]!);
  renderWizard(panes["Seal"]!, api, store);
  renderVerifyView(panes["Verify"]!, api);
  renderDirectory(panes["Directory"]!, api);
  return api;
}

declare global {
  interface Window {
    __TRANSEAL_BASE_URL__?: string;
  }
}

if (typeof document !== "undefined" && document.getElementById("portal-root")) {
  mountPortal(
    document.getElementById("portal-root")!,
    window.__TRANSEAL_BASE_URL__ ?? "",
  );
}
