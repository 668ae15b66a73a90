/**
 * Block debrief forms: two side-by-side 8x7 Likert matrices, then a forced
 * choice with a free-text justification. Submission gates mirror the server's
 * validation so a well-behaved client never triggers a rejection: all 16
 * items answered, free text at the server-declared minimum.
 */
import type { ClientMessage } from "./protocol.js";

export const LIKERT_MIN = 1;
export const LIKERT_MAX = 7;
export const MIN_FREE_TEXT_CHARS = 10;

export type Answers = Map<string, number>; // "identity:qN" -> 1..7

export interface SurveyForm {
  identities: [string, string];
  items: string[];
  answers: Answers;
}

export function newSurveyForm(identities: [string, string], items: string[]): SurveyForm {
  return { identities, items, answers: new Map() };
}

/** Answers stay editable until submit; out-of-range values are rejected. */
export function setAnswer(form: SurveyForm, identity: string, item: number, value: number): void {
  if (!form.identities.includes(identity)) throw new Error(`unknown identity ${identity}`);
  if (item < 1 || item > form.items.length) throw new Error(`item out of range: ${item}`);
  if (!Number.isInteger(value) || value < LIKERT_MIN || value > LIKERT_MAX) {
    throw new Error(`likert value out of range: ${value}`);
  }
  form.answers.set(`${identity}:q${item}`, value);
}

export function surveyComplete(form: SurveyForm): boolean {
  for (const identity of form.identities) {
    for (let i = 1; i <= form.items.length; i++) {
      if (!form.answers.has(`${identity}:q${i}`)) return false;
    }
  }
  return true;
}

/** Null while incomplete — the submit button stays disabled. */
export function buildSurveySubmit(form: SurveyForm): ClientMessage | null {
  if (!surveyComplete(form)) return null;
  const answersFor = (identity: string) => {
    const get = (i: number) => form.answers.get(`${identity}:q${i}`)!;
    return { q1: get(1), q2: get(2), q3: get(3), q4: get(4), q5: get(5), q6: get(6), q7: get(7), q8: get(8) };
  };
  return {
    kind: "survey_submit",
    responses: Object.fromEntries(form.identities.map((id) => [id, answersFor(id)])),
  };
}

export function freeTextAcceptable(text: string, minChars: number = MIN_FREE_TEXT_CHARS): boolean {
  return text.length >= minChars;
}

/** Null when no identity picked or the justification is too short. */
export function buildChoiceSubmit(
  identities: [string, string],
  chosen: string | null,
  freeText: string,
  minChars: number = MIN_FREE_TEXT_CHARS,
): ClientMessage | null {
  if (chosen === null || !identities.includes(chosen)) return null;
  if (!freeTextAcceptable(freeText, minChars)) return null;
  return { kind: "choice_submit", identity: chosen, free_text: freeText };
}
