/**
 * Test scaffolding: spawn the real sealing service, build source
 * documents with the transeal CLI, and small DOM helpers.  Everything
 * reaches the transeal package through its public surfaces only (the HTTP
 * API and the command line).
 */

import { spawn, spawnSync } from "node:child_process";
import { mkdtempSync, writeFileSync, readFileSync } from "node:fs";
import { get as httpGet } from "node:http";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";

export interface LiveService {
  baseUrl: string;
  adminToken: string;
  stop: () => Promise<void>;
}

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const probe = createServer();
    probe.once("error", reject);
    probe.listen(0, "127.0.0.1", () => {
      const address = probe.address();
      if (address === null || typeof address === "string") {
        reject(new Error("no port"));
        return;
      }
      probe.close(() => resolve(address.port));
    });
  });
}

export async function startService(): Promise<LiveService> {
  const port = await freePort();
  const adminToken = "portal-admin-token";
  const dir = mkdtempSync(join(tmpdir(), "portal-service-"));
  const configPath = join(dir, "service.json");
  writeFileSync(
    configPath,
    JSON.stringify({
      dataDir: join(dir, "data"),
      adminToken,
      port,
      courtName: "District Court",
    }),
  );
  const proc = spawn("python3", ["-m", "transeal.cli", "serve", "--config", configPath], {
    stdio: ["ignore", "pipe", "pipe"],
  });
  let stderr = "";
  proc.stderr?.on("data", (chunk) => {
    stderr += String(chunk);
  });
  const exited = new Promise<void>((resolve) => {
    proc.once("exit", () => resolve());
  });

  const baseUrl = `http://127.0.0.1:${port}`;

  // poll with node's own http client: the happy-dom fetch logs connection
  // errors to the console, which would drown the test output while the
  // server is still starting up
  const healthy = () =>
    new Promise<boolean>((resolve) => {
      const request = httpGet(`${baseUrl}/healthz`, (response) => {
        response.resume();
        resolve(response.statusCode === 200);
      });
      request.once("error", () => resolve(false));
    });

  const deadline = Date.now() + 30_000;
  for (;;) {
    if (proc.exitCode !== null) {
      throw new Error(`service exited early: ${stderr}`);
    }
    if (await healthy()) {
      break;
    }
    if (Date.now() > deadline) {
      proc.kill("SIGKILL");
      throw new Error(`service never became healthy: ${stderr}`);
    }
    await new Promise((resolve) => setTimeout(resolve, 100));
  }

  return {
    baseUrl,
    adminToken,
    stop: async () => {
      proc.kill("SIGTERM");
      const timer = setTimeout(() => proc.kill("SIGKILL"), 5_000);
      await exited;
      clearTimeout(timer);
    },
  };
}

function runCli(args: string[], cwd: string): { status: number; output: string } {
  const result = spawnSync("python3", ["-m", "transeal.cli", ...args], {
    cwd,
    encoding: "utf8",
  });
  return {
    status: result.status ?? -1,
    output: `${result.stdout ?? ""}${result.stderr ?? ""}`,
  };
}

function expectOk(result: { status: number; output: string }): void {
  if (result.status !== 0) {
    throw new Error(`transeal CLI failed: ${result.output}`);
  }
}

/** An unsigned source document, built by the transeal CLI. */
export function makeUnsignedSdoc(text: string): Uint8Array {
  const dir = mkdtempSync(join(tmpdir(), "portal-sdoc-"));
  writeFileSync(join(dir, "source.txt"), text);
  expectOk(
    runCli(["sign-doc", "--content", "source.txt", "--unsigned", "-o", "source.sdoc"], dir),
  );
  return new Uint8Array(readFileSync(join(dir, "source.sdoc")));
}

/**
 * A source document signed under a PKI the service does not anchor —
 * the signature panel should report it, with result "indeterminate".
 */
export function makeForeignSignedSdoc(text: string): Uint8Array {
  const dir = mkdtempSync(join(tmpdir(), "portal-signed-"));
  writeFileSync(join(dir, "source.txt"), text);
  expectOk(runCli(["keygen", "root.key"], dir));
  expectOk(
    runCli(
      [
        "ca-issue", "--self-signed", "--subject", "Foreign Root",
        "--key", "root.key", "--days", "3650", "-o", "root-cert.xml",
      ],
      dir,
    ),
  );
  expectOk(runCli(["keygen", "notary.key"], dir));
  expectOk(
    runCli(
      [
        "ca-issue", "--subject", "Notary N", "--subject-key", "notary.key",
        "--key", "root.key", "--issuer-cert", "root-cert.xml", "--qc",
        "-o", "notary-cert.xml",
      ],
      dir,
    ),
  );
  expectOk(
    runCli(
      [
        "sign-doc", "--content", "source.txt", "--key", "notary.key",
        "--cert", "notary-cert.xml", "--cert", "root-cert.xml",
        "-o", "source.sdoc",
      ],
      dir,
    ),
  );
  return new Uint8Array(readFileSync(join(dir, "source.sdoc")));
}

/** Run the transeal CLI verifier against a seal and the service's trust material. */
export async function cliVerify(
  tseal: Uint8Array,
  baseUrl: string,
): Promise<{ status: number; output: string }> {
  const dir = mkdtempSync(join(tmpdir(), "portal-verify-"));
  const anchors = await fetch(`${baseUrl}/anchors`);
  writeFileSync(join(dir, "anchors.xml"), new Uint8Array(await anchors.arrayBuffer()));
  const revocations = await fetch(`${baseUrl}/revocations`);
  writeFileSync(
    join(dir, "revocations.xml"),
    new Uint8Array(await revocations.arrayBuffer()),
  );
  writeFileSync(join(dir, "translated.tseal"), tseal);
  return runCli(
    [
      "verify", "translated.tseal",
      "--anchors", "anchors.xml",
      "--revocations", "revocations.xml",
    ],
    dir,
  );
}

// -- DOM helpers ---------------------------------------------------------------

export function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`no element #${id}; document: ${document.body.innerHTML.slice(0, 400)}`);
  }
  return node as T;
}

export function setInputFile(input: HTMLInputElement, name: string, bytes: Uint8Array): void {
  // copy into a fresh buffer: File wants a plain ArrayBuffer-backed part
  const file = new File([new Uint8Array(bytes).buffer], name);
  Object.defineProperty(input, "files", { value: [file], configurable: true });
}

export async function waitFor(
  predicate: () => boolean,
  what = "condition",
  timeoutMs = 15_000,
): Promise<void> {
  const start = Date.now();
  while (!predicate()) {
    if (Date.now() - start > timeoutMs) {
      throw new Error(`timed out waiting for ${what}`);
    }
    await new Promise((resolve) => setTimeout(resolve, 25));
  }
}

let uniqueCounter = 0;

export function uniqueName(prefix: string): string {
  uniqueCounter += 1;
  return `${prefix} ${Date.now()}-${uniqueCounter}`;
}
