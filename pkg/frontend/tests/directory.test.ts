import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { PortalApi } from "../src/api.js";
import { renderDirectory } from "../src/directory.js";
import { mountPortal } from "../src/main.js";
import {
  byId,
  startService,
  uniqueName,
  waitFor,
  type LiveService,
} from "./support.js";

let service: LiveService;

beforeAll(async () => {
  service = await startService();
});

afterAll(async () => {
  await service.stop();
});

function mountDirectory(): PortalApi {
  document.body.innerHTML = "";
  const root = document.createElement("div");
  document.body.appendChild(root);
  const api = new PortalApi(service.baseUrl);
  renderDirectory(root, api);
  return api;
}

function cardText(cls: string): string | null {
  return document.querySelector(`.translator-card .${cls}`)?.textContent ?? null;
}

async function lookUp(name: string): Promise<void> {
  byId<HTMLInputElement>("lookup-name").value = name;
  byId("lookup-submit").click();
  await waitFor(
    () => document.querySelector(".translator-card dt") !== null,
    "lookup result",
  );
}

describe("directory view", () => {
  it("shows a freshly registered translator as pending", async () => {
    const name = uniqueName("Petra Pending");
    const setup = new PortalApi(service.baseUrl);
    const info = await setup.register(name, "pending-credential");

    mountDirectory();
    await lookUp(name);

    expect(cardText("card-name")).toBe(name);
    expect(cardText("card-status")).toBe("pending");
    expect(cardText("card-role")).toBe("—");
    expect(cardText("card-authority")).toBe("—");
    expect(cardText("card-language-pairs")).toBe("—");
    expect(cardText("card-certificate-serial")).toBe(info.certificateSerial);
  });

  it("shows role and authority once the translator is authorised", async () => {
    const name = uniqueName("Ada Authorised");
    const setup = new PortalApi(service.baseUrl);
    setup.adminToken = service.adminToken;
    const info = await setup.register(name, "authorised-credential");
    await setup.enterCourtDirectory("District Court", name);
    await setup.authorise(info.id, ["fr-de", "en-de"]);

    mountDirectory();
    await lookUp(name);

    expect(cardText("card-status")).toBe("authorised");
    expect(cardText("card-role")).toBe("authorised translator fr-de, en-de");
    expect(cardText("card-authority")).toBe("District Court");
    expect(cardText("card-language-pairs")).toBe("fr-de, en-de");
  });

  it("reports an unknown name inline", async () => {
    mountDirectory();
    byId<HTMLInputElement>("lookup-name").value = "Nobody In Particular";
    byId("lookup-submit").click();
    await waitFor(
      () => !(document.querySelector(".directory-error") as HTMLElement).hidden,
      "lookup error",
    );
    expect(document.querySelector(".directory-error")!.textContent).toContain(
      "Nobody In Particular",
    );
  });

  it("maintains court directory entries with the admin token", async () => {
    const name = uniqueName("Carl Clerk");
    const api = mountDirectory();

    const token = byId<HTMLInputElement>("admin-token");
    token.value = service.adminToken;
    token.dispatchEvent(new Event("change"));
    expect(api.adminToken).toBe(service.adminToken);

    byId<HTMLInputElement>("entry-authority").value = "District Court";
    byId<HTMLInputElement>("entry-name").value = name;
    byId("entry-add").click();
    await waitFor(
      () => document.querySelector(".court-entries")!.textContent!.includes(name),
      "directory entry",
    );
    const entry = [...document.querySelectorAll(".court-entries li")].find((li) =>
      li.textContent!.includes(name),
    )!;
    expect(entry.textContent).toContain(`District Court: ${name} (since `);

    byId("entry-remove").click();
    await waitFor(
      () => !document.querySelector(".court-entries")!.textContent!.includes(name),
      "directory entry removal",
    );
  });
});

describe("portal shell", () => {
  function mountShell(): PortalApi {
    document.body.innerHTML = "";
    const root = document.createElement("div");
    document.body.appendChild(root);
    return mountPortal(root, service.baseUrl);
  }

  it("registers a session and keeps the credential in memory only", async () => {
    const api = mountShell();
    const name = uniqueName("Session Sam");
    byId<HTMLInputElement>("session-name").value = name;
    byId<HTMLInputElement>("session-credential").value = "session-credential";
    byId("session-register").click();
    await waitFor(
      () => document.querySelector(".session-who")!.textContent !== "",
      "registration",
    );
    expect(document.querySelector(".session-who")!.textContent).toBe(
      `signed in as ${name}`,
    );

    expect(api.session).toEqual({
      translatorId: expect.any(String),
      credential: "session-credential",
    });
    // nothing persisted: no storage entries, no cookies
    expect(window.localStorage.length).toBe(0);
    expect(window.sessionStorage.length).toBe(0);
    expect(document.cookie).toBe("");
  });

  it("relays the server's rejection of a too-short credential", async () => {
    mountShell();
    byId<HTMLInputElement>("session-name").value = uniqueName("Short");
    byId<HTMLInputElement>("session-credential").value = "short";
    byId("session-register").click();
    await waitFor(
      () => document.querySelector(".session-who")!.textContent !== "",
      "rejection",
    );
    expect(document.querySelector(".session-who")!.textContent).toContain(
      "credential",
    );
  });

  it("switches between the three panes", () => {
    mountShell();
    const buttons = [...document.querySelectorAll<HTMLButtonElement>(".tabs button")];
    expect(buttons.map((b) => b.textContent)).toEqual(["Seal", "Verify", "Directory"]);

    const pane = (cls: string) => document.querySelector(`.${cls}`) as HTMLElement;
    expect(pane("pane-seal").hidden).toBe(false);
    expect(pane("pane-verify").hidden).toBe(true);

    buttons[1]!.click();
    expect(pane("pane-seal").hidden).toBe(true);
    expect(pane("pane-verify").hidden).toBe(false);
    expect(pane("pane-directory").hidden).toBe(true);

    buttons[2]!.click();
    expect(pane("pane-verify").hidden).toBe(true);
    expect(pane("pane-directory").hidden).toBe(false);
  });
});
