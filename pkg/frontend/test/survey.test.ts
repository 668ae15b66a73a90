import { describe, expect, it } from "vitest";

import { isValidClientMessage } from "../src/protocol.js";
import {
  buildChoiceSubmit,
  buildSurveySubmit,
  freeTextAcceptable,
  newSurveyForm,
  setAnswer,
  surveyComplete,
} from "../src/survey.js";

const IDENTITIES: [string, string] = ["green", "purple"];
const ITEMS = Array.from({ length: 8 }, (_, i) => `statement ${i + 1}`);

function filledForm(skip?: { identity: string; item: number }) {
  const form = newSurveyForm(IDENTITIES, ITEMS);
  for (const identity of IDENTITIES) {
    for (let i = 1; i <= 8; i++) {
      if (skip && skip.identity === identity && skip.item === i) continue;
      setAnswer(form, identity, i, ((i + (identity === "green" ? 0 : 3)) % 7) + 1);
    }
  }
  return form;
}

describe("survey gating", () => {
  it("15 of 16 answers keeps submission blocked", () => {
    const form = filledForm({ identity: "purple", item: 8 });
    expect(surveyComplete(form)).toBe(false);
    expect(buildSurveySubmit(form)).toBeNull();
  });

  it("all 16 answers unlock a schema-valid submit", () => {
    const form = filledForm();
    expect(surveyComplete(form)).toBe(true);
    const msg = buildSurveySubmit(form)!;
    expect(msg.kind).toBe("survey_submit");
    expect(isValidClientMessage(msg)).toBe(true);
  });

  it("the payload echoes exactly the selected values", () => {
    const form = newSurveyForm(IDENTITIES, ITEMS);
    const chosen: Record<string, Record<string, number>> = { green: {}, purple: {} };
    for (const identity of IDENTITIES) {
      for (let i = 1; i <= 8; i++) {
        const v = ((i * 3 + (identity === "green" ? 1 : 5)) % 7) + 1;
        setAnswer(form, identity, i, v);
        chosen[identity][`q${i}`] = v;
      }
    }
    const msg = buildSurveySubmit(form)!;
    if (msg.kind === "survey_submit") {
      expect(msg.responses).toEqual(chosen);
    }
  });

  it("answers stay editable until submit", () => {
    const form = filledForm();
    setAnswer(form, "green", 1, 7);
    const msg = buildSurveySubmit(form)!;
    if (msg.kind === "survey_submit") {
      expect(msg.responses.green.q1).toBe(7);
    }
  });

  it("rejects out-of-range likert values and unknown identities", () => {
    const form = newSurveyForm(IDENTITIES, ITEMS);
    expect(() => setAnswer(form, "green", 1, 0)).toThrow();
    expect(() => setAnswer(form, "green", 1, 8)).toThrow();
    expect(() => setAnswer(form, "green", 1, 4.5)).toThrow();
    expect(() => setAnswer(form, "crimson", 1, 4)).toThrow();
    expect(() => setAnswer(form, "green", 9, 4)).toThrow();
  });
});

describe("choice gating", () => {
  it("9 characters with minimum 10 is blocked client-side", () => {
    expect(freeTextAcceptable("123456789", 10)).toBe(false);
    expect(buildChoiceSubmit(IDENTITIES, "green", "123456789")).toBeNull();
  });

  it("meeting the minimum unlocks a valid submit", () => {
    expect(freeTextAcceptable("1234567890", 10)).toBe(true);
    const msg = buildChoiceSubmit(IDENTITIES, "purple", "they shared the arena fairly")!;
    expect(msg).toEqual({
      kind: "choice_submit",
      identity: "purple",
      free_text: "they shared the arena fairly",
    });
    expect(isValidClientMessage(msg)).toBe(true);
  });

  it("requires a picked identity from the presented pair", () => {
    expect(buildChoiceSubmit(IDENTITIES, null, "long enough text")).toBeNull();
    expect(buildChoiceSubmit(IDENTITIES, "copper", "long enough text")).toBeNull();
  });
});
