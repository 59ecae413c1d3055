/**
 * View state for one sealing job.
 *
 * The wizard's position is *derived* from the server's phase cursor —
 * `applyStatus` is the only way the phase changes, so the client can
 * never skip ahead of the service, and a reload lands on the same step.
 */

import type { JobStatus, SignaturePanelEntry, SourceInfo } from "./api.js";

export const PHASES = [
  "Classification",
  "SignatureExtraction",
  "Conversion",
  "ConversionAssay",
  "TransformationAssay",
  "Sealed",
] as const;

export type Phase = (typeof PHASES)[number];

export interface WizardStep {
  phase: Phase;
  title: string;
}

/**
 * One wizard step per server phase the operator acts in.
 * SignatureExtraction is the engine's own activity: the server runs it
 * immediately after classification, so the operator reviews its results
 * at the top of the Conversion step instead of on a step of its own.
 */
export const WIZARD_STEPS: WizardStep[] = [
  { phase: "Classification", title: "Source & classification" },
  { phase: "Conversion", title: "Signatures & translated target" },
  { phase: "ConversionAssay", title: "Review the conversion" },
  { phase: "TransformationAssay", title: "Annotate & seal" },
  { phase: "Sealed", title: "Download" },
];

export interface ClassificationForm {
  sourceLanguage: string;
  targetLanguage: string;
  targetFormat: string;
  transliterations: { script: string; standard: string }[];
  calendarConversion: string | null;
}

export interface AnnotationForm {
  defects: string[];
  comments: string;
  attestation: string;
  location: string;
}

export interface ViewState {
  jobId: string | null;
  phase: Phase;
  sealed: boolean;
  source: SourceInfo | null;
  signatures: SignaturePanelEntry[];
  classification: ClassificationForm;
  annotation: AnnotationForm;
  sealedBytes: Uint8Array | null;
  error: string | null;
}

function initialState(): ViewState {
  return {
    jobId: null,
    phase: "Classification",
    sealed: false,
    source: null,
    signatures: [],
    classification: {
      sourceLanguage: "",
      targetLanguage: "",
      targetFormat: "text/plain;charset=utf-8",
      transliterations: [],
      calendarConversion: null,
    },
    annotation: { defects: [], comments: "", attestation: "", location: "" },
    sealedBytes: null,
    error: null,
  };
}

export class WorkflowViewState {
  private state: ViewState = initialState();
  private listeners: (() => void)[] = [];

  get(): ViewState {
    return this.state;
  }

  subscribe(listener: () => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((entry) => entry !== listener);
    };
  }

  private emit(): void {
    for (const listener of this.listeners) {
      listener();
    }
  }

  set(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    this.emit();
  }

  reset(): void {
    this.state = initialState();
    this.emit();
  }

  /** Mirror the server's job status; the single entry point for phase changes. */
  applyStatus(status: JobStatus): void {
    if (!PHASES.includes(status.phase as Phase)) {
      throw new Error(`unknown phase ${JSON.stringify(status.phase)}`);
    }
    this.set({
      jobId: status.id,
      phase: status.phase as Phase,
      sealed: status.sealed,
      source: status.source,
      signatures: status.signatures,
      error: null,
    });
  }

  /** Index of the step the server's cursor is on. */
  stepIndex(): number {
    const phase = this.state.sealed ? "Sealed" : this.state.phase;
    for (let index = WIZARD_STEPS.length - 1; index >= 0; index -= 1) {
      if (PHASES.indexOf(WIZARD_STEPS[index]!.phase) <= PHASES.indexOf(phase)) {
        return index;
      }
    }
    return 0;
  }

  /** Steps at or before the server's cursor are visible; nothing beyond. */
  canShow(stepIndex: number): boolean {
    return stepIndex <= this.stepIndex();
  }
}
