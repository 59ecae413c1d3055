import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { PortalApi, fromBase64 } from "../src/api.js";
import { renderVerifyView } from "../src/verify.js";
import {
  byId,
  makeUnsignedSdoc,
  setInputFile,
  startService,
  uniqueName,
  waitFor,
  type LiveService,
} from "./support.js";

let service: LiveService;
let sealBytes: Uint8Array;

const SOURCE_TEXT = "Bonjour, tout le monde.";
const TARGET_TEXT = "Hallo, alle zusammen.";

beforeAll(async () => {
  service = await startService();

  // produce one genuine seal through the service, API-only
  const api = new PortalApi(service.baseUrl);
  api.adminToken = service.adminToken;
  const name = uniqueName("Vera Prüfer");
  const info = await api.register(name, "verify-credential");
  await api.enterCourtDirectory("District Court", name);
  await api.authorise(info.id, ["fr-de"]);
  const job = await api.createJob(makeUnsignedSdoc(SOURCE_TEXT));
  await api.classify(job.id, {
    sourceLanguage: "fr",
    targetLanguage: "de",
    targetFormat: "text/plain;charset=utf-8",
  });
  await api.uploadTarget(
    job.id,
    new TextEncoder().encode(TARGET_TEXT),
    "text/plain;charset=utf-8",
  );
  await api.confirmAssay(job.id, true);
  const sealed = await api.seal(job.id, {
    attestation: "Certified complete and accurate.",
    location: "Berlin",
  });
  sealBytes = fromBase64(sealed.tseal!);
});

afterAll(async () => {
  await service.stop();
});

function mountVerifyView(): void {
  document.body.innerHTML = "";
  const root = document.createElement("div");
  document.body.appendChild(root);
  renderVerifyView(root, new PortalApi(service.baseUrl));
}

async function submitFile(bytes: Uint8Array): Promise<void> {
  setInputFile(byId<HTMLInputElement>("tseal-file"), "translated.tseal", bytes);
  byId("verify-submit").click();
  await waitFor(
    () =>
      document.querySelector("#verify-overall") !== null ||
      !(document.querySelector(".verify-error") as HTMLElement).hidden,
    "verification response",
  );
}

describe("verification view", () => {
  it("renders an all-green report for a genuine seal", async () => {
    mountVerifyView();
    await submitFile(sealBytes);

    const overall = byId("verify-overall");
    expect(overall.textContent).toBe("Seal is VALID");
    expect(overall.classList.contains("verdict-pass")).toBe(true);

    expect(document.querySelectorAll(".gate").length).toBe(4);
    expect(document.querySelectorAll(".gate-fail").length).toBe(0);
    const authorisation = document.querySelector(".gate-authorisation")!;
    expect(authorisation.textContent).toContain("authorised translator fr-de");
    expect(authorisation.textContent).toContain("District Court");

    // one row per rule in the workflow, every one of them a pass
    const ruleRows = document.querySelectorAll(".rules tr");
    expect(ruleRows.length).toBe(15);
    expect(document.querySelectorAll(".rules .rule-pass").length).toBe(15);

    // embedded documents decoded for side-by-side reading
    expect(byId("embedded-source").textContent).toBe(SOURCE_TEXT);
    expect(byId("embedded-target").textContent).toBe(TARGET_TEXT);
  });

  it("shows the failing binding gate for a tampered file", async () => {
    // swap the unsigned top-level format label; the signed workflow report
    // still names the original, so the binding gate must catch the mismatch
    const xml = new TextDecoder().decode(sealBytes);
    const tampered = xml.replace(
      "<TargetFormat>text/plain;charset=utf-8</TargetFormat>",
      "<TargetFormat>application/pdf</TargetFormat>",
    );
    expect(tampered).not.toBe(xml);

    mountVerifyView();
    await submitFile(new TextEncoder().encode(tampered));

    const overall = byId("verify-overall");
    expect(overall.textContent).toBe("Seal is NOT VALID");
    expect(overall.classList.contains("verdict-fail")).toBe(true);

    const binding = document.querySelector(".gate-binding")!;
    expect(binding.classList.contains("gate-fail")).toBe(true);
    expect(binding.textContent).toContain("differs from classified");

    // the tampered element sits outside the sealed payload, so the other
    // gates still hold — the report pinpoints what was altered
    expect(
      document.querySelector(".gate-seal-signature")!.classList.contains("gate-pass"),
    ).toBe(true);
    expect(
      document.querySelector(".gate-report-chain")!.classList.contains("gate-pass"),
    ).toBe(true);
  });

  it("shows the server's parse error for bytes that are not a seal", async () => {
    mountVerifyView();
    await submitFile(new TextEncoder().encode("this is not XML at all"));

    const error = document.querySelector(".verify-error") as HTMLElement;
    expect(error.hidden).toBe(false);
    expect(error.textContent!.length).toBeGreaterThan(0);
    expect(document.querySelector("#verify-overall")).toBeNull();
  });
});
