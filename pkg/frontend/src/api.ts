/**
 * Typed client for the sealing service's HTTP+JSON API.
 *
 * The portal performs no cryptography and no rule evaluation: every
 * operation here is a plain service call, and the server's answer is the
 * only source of truth.  Credentials live in memory for the session only.
 */

export interface Session {
  translatorId: string;
  credential: string;
}

export interface TranslatorInfo {
  id: string;
  name: string;
  authorised: boolean;
  role: string | null;
  authority: string | null;
  languagePairs: string[];
  certificateSerial: string;
}

export interface SourceInfo {
  format: string;
  size: number;
  contentId: string;
}

export interface PanelCertificate {
  subject: string;
  issuer: string;
  serial: string;
  status: string;
}

export interface SignaturePanelEntry {
  result: string;
  signer: string;
  authority: string | null;
  signingTime: string;
  certificates: PanelCertificate[];
  attributeCertificates: { issuer: string; attributes: Record<string, string> }[];
}

export interface JobStatus {
  id: string;
  translatorId: string;
  phase: string;
  createdAt: string;
  sealed: boolean;
  targetDigest: string | null;
  source: SourceInfo;
  signatures: SignaturePanelEntry[];
  tseal?: string;
}

export interface GateReport {
  ok: boolean;
  failures: string[];
}

export interface VerificationReport {
  ok: boolean;
  sealSignature: { result: string; detail: string };
  binding: GateReport;
  reportChain: GateReport;
  authorisation: {
    ok: boolean;
    role: string | null;
    authority: string | null;
    detail: string;
  };
  rules: { activity: string; ruleId: string; outcome: string; detail: string }[];
  sealingTime: string;
  sourceContentId: string;
  targetDigest: string;
}

export interface CourtEntry {
  authority: string;
  name: string;
  enteredAt: string;
}

/** A service error; `detail` carries the failing RULE_* id when one applies. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly detail: string | null,
  ) {
    super(message);
    this.name = "ApiError";
  }

  /** The text the UI should show inline. */
  display(): string {
    return this.detail ? `${this.message} [${this.detail}]` : this.message;
  }
}

export function toBase64(bytes: Uint8Array): string {
  let binary = "";
  for (let i = 0; i < bytes.length; i += 1) {
    binary += String.fromCharCode(bytes[i]!);
  }
  return btoa(binary);
}

export function fromBase64(text: string): Uint8Array {
  return Uint8Array.from(atob(text), (ch) => ch.charCodeAt(0));
}

async function unwrap<T>(response: Response): Promise<T> {
  if (response.ok) {
    return (await response.json()) as T;
  }
  let code = "error";
  let message = `${response.status} ${response.statusText}`;
  let detail: string | null = null;
  try {
    const body = await response.json();
    code = body.code ?? code;
    message = body.message ?? message;
    detail = body.detail ?? null;
  } catch {
    // non-JSON error body; keep the status line
  }
  throw new ApiError(response.status, code, message, detail);
}

export class PortalApi {
  session: Session | null = null;
  adminToken: string | null = null;

  constructor(readonly baseUrl: string) {}

  private authHeaders(): Record<string, string> {
    if (!this.session) {
      throw new ApiError(401, "unauthorised", "not signed in", null);
    }
    return {
      "X-Translator-Id": this.session.translatorId,
      "X-Credential": this.session.credential,
    };
  }

  private adminHeaders(): Record<string, string> {
    if (!this.adminToken) {
      throw new ApiError(401, "unauthorised", "no admin token", null);
    }
    return { "X-Admin-Token": this.adminToken };
  }

  private async post<T>(
    path: string,
    body: unknown,
    headers: Record<string, string> = {},
  ): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json", ...headers },
      body: JSON.stringify(body),
    });
    return unwrap<T>(response);
  }

  private async get<T>(
    path: string,
    headers: Record<string, string> = {},
  ): Promise<T> {
    const response = await fetch(this.baseUrl + path, { headers });
    return unwrap<T>(response);
  }

  // -- public ------------------------------------------------------------

  health(): Promise<{ status: string; translators: number; openJobs: number; sealsIssued: number }> {
    return this.get("/healthz");
  }

  verifySeal(tseal: Uint8Array): Promise<VerificationReport> {
    return this.post("/seals/verify", { tseal: toBase64(tseal) });
  }

  async anchorsXml(): Promise<Uint8Array> {
    const response = await fetch(this.baseUrl + "/anchors");
    return new Uint8Array(await response.arrayBuffer());
  }

  async revocationsXml(): Promise<Uint8Array> {
    const response = await fetch(this.baseUrl + "/revocations");
    return new Uint8Array(await response.arrayBuffer());
  }

  // -- accounts ------------------------------------------------------------

  async register(name: string, credential: string): Promise<TranslatorInfo> {
    const info = await this.post<TranslatorInfo>("/translators", { name, credential });
    this.session = { translatorId: info.id, credential };
    return info;
  }

  signIn(translatorId: string, credential: string): void {
    this.session = { translatorId, credential };
  }

  findTranslator(name: string): Promise<TranslatorInfo> {
    return this.get(`/translators?name=${encodeURIComponent(name)}`);
  }

  translatorInfo(translatorId: string): Promise<TranslatorInfo> {
    return this.get(`/translators/${encodeURIComponent(translatorId)}`);
  }

  // -- admin (demo directory management) --------------------------------------

  authorise(translatorId: string, languagePairs: string[]): Promise<TranslatorInfo> {
    return this.post(
      `/translators/${encodeURIComponent(translatorId)}/authorise`,
      { languagePairs },
      this.adminHeaders(),
    );
  }

  revoke(translatorId: string): Promise<{ id: string; revokedAt: string; serial: string }> {
    return this.post(
      `/translators/${encodeURIComponent(translatorId)}/revoke`,
      {},
      this.adminHeaders(),
    );
  }

  courtDirectory(): Promise<CourtEntry[]> {
    return this.get("/admin/court", this.adminHeaders());
  }

  async enterCourtDirectory(authority: string, name: string): Promise<CourtEntry> {
    const response = await fetch(
      this.baseUrl +
        `/admin/court/${encodeURIComponent(authority)}/${encodeURIComponent(name)}`,
      { method: "PUT", headers: this.adminHeaders() },
    );
    return unwrap<CourtEntry>(response);
  }

  async removeFromCourtDirectory(authority: string, name: string): Promise<void> {
    const response = await fetch(
      this.baseUrl +
        `/admin/court/${encodeURIComponent(authority)}/${encodeURIComponent(name)}`,
      { method: "DELETE", headers: this.adminHeaders() },
    );
    if (!response.ok) {
      await unwrap(response);
    }
  }

  // -- jobs ---------------------------------------------------------------------

  createJob(sourceSdoc: Uint8Array): Promise<JobStatus> {
    return this.post("/jobs", { sourceSdoc: toBase64(sourceSdoc) }, this.authHeaders());
  }

  jobStatus(jobId: string): Promise<JobStatus> {
    return this.get(`/jobs/${encodeURIComponent(jobId)}`, this.authHeaders());
  }

  classify(
    jobId: string,
    form: {
      sourceLanguage: string;
      targetLanguage: string;
      sourceFormat?: string;
      targetFormat: string;
      transliterations?: { script: string; standard: string }[];
      calendarConversion?: string | null;
    },
  ): Promise<JobStatus> {
    return this.post(`/jobs/${encodeURIComponent(jobId)}/classify`, form, this.authHeaders());
  }

  uploadTarget(
    jobId: string,
    content: Uint8Array,
    format: string,
    defects: string[] = [],
  ): Promise<JobStatus> {
    return this.post(
      `/jobs/${encodeURIComponent(jobId)}/target`,
      { targetContent: toBase64(content), targetFormat: format, defects },
      this.authHeaders(),
    );
  }

  confirmAssay(jobId: string, confirmed: boolean): Promise<JobStatus> {
    return this.post(
      `/jobs/${encodeURIComponent(jobId)}/assay`,
      { confirmed },
      this.authHeaders(),
    );
  }

  seal(
    jobId: string,
    form: { attestation: string; location: string; defects?: string[]; comments?: string | null },
  ): Promise<JobStatus> {
    return this.post(`/jobs/${encodeURIComponent(jobId)}/seal`, form, this.authHeaders());
  }

  async jobResult(jobId: string): Promise<Uint8Array> {
    const response = await fetch(
      this.baseUrl + `/jobs/${encodeURIComponent(jobId)}/result`,
      { headers: this.authHeaders() },
    );
    if (!response.ok) {
      await unwrap(response);
    }
    return new Uint8Array(await response.arrayBuffer());
  }
}
