/**
 * Wire protocol: schemas for every frame the server may send and every
 * message this client is allowed to emit. The client is a pure view over
 * this protocol — anything not described here must never cross the socket.
 */
import { z } from "zod";

export const PROTOCOL_VERSION = 1;

// ---- server -> client ------------------------------------------------------

export const helloSchema = z.object({
  kind: z.literal("hello"),
  protocol_version: z.number().int(),
  session_id: z.string(),
  display_identity: z.string(),
  arena_radius: z.number().positive(),
  density: z.number().int().positive(),
  round_length_s: z.number().positive(),
});

export const targetSchema = z.object({
  id: z.number().int().nonnegative(),
  x: z.number(),
  y: z.number(),
  value: z.number().int().min(0).max(15),
});

const avatarSchema = z.object({
  x: z.number(),
  y: z.number(),
  mark: z.number().int().nullable(),
});

const scoresSchema = z.object({
  human: z.number().int(),
  ai: z.number().int(),
  team: z.number().int(),
});

export const stateSchema = z.object({
  kind: z.literal("state"),
  t: z.number().nonnegative(),
  targets: z.array(targetSchema),
  human: avatarSchema,
  ai: avatarSchema,
  scores: scoresSchema,
});

export const roundEndSchema = z.object({
  kind: z.literal("round_end"),
  scores: scoresSchema,
});

export const surveyRequestSchema = z.object({
  kind: z.literal("survey_request"),
  items: z.array(z.string()).length(8),
  identities: z.array(z.string()).length(2),
});

export const choiceRequestSchema = z.object({
  kind: z.literal("choice_request"),
  identities: z.array(z.string()).length(2),
});

export const errorSchema = z.object({
  kind: z.literal("error"),
  message: z.string(),
});

export const doneSchema = z.object({ kind: z.literal("done") });

export const serverFrameSchema = z.discriminatedUnion("kind", [
  helloSchema,
  stateSchema,
  roundEndSchema,
  surveyRequestSchema,
  choiceRequestSchema,
  errorSchema,
  doneSchema,
]);

export type Hello = z.infer<typeof helloSchema>;
export type StateFrame = z.infer<typeof stateSchema>;
export type Target = z.infer<typeof targetSchema>;
export type ServerFrame = z.infer<typeof serverFrameSchema>;

export function parseServerFrame(text: string): ServerFrame {
  return serverFrameSchema.parse(JSON.parse(text));
}

// ---- client -> server ------------------------------------------------------

export const clickMessageSchema = z.object({
  kind: z.literal("click"),
  target_id: z.number().int().nonnegative(),
});

export const clickCenterMessageSchema = z.object({
  kind: z.literal("click_center"),
});

const likert = z.number().int().min(1).max(7);
const answersSchema = z.object({
  q1: likert, q2: likert, q3: likert, q4: likert,
  q5: likert, q6: likert, q7: likert, q8: likert,
});

export const surveySubmitSchema = z.object({
  kind: z.literal("survey_submit"),
  responses: z.record(z.string(), answersSchema),
});

export const choiceSubmitSchema = z.object({
  kind: z.literal("choice_submit"),
  identity: z.string(),
  free_text: z.string(),
});

export const clientMessageSchema = z.discriminatedUnion("kind", [
  clickMessageSchema,
  clickCenterMessageSchema,
  surveySubmitSchema,
  choiceSubmitSchema,
]);

export type ClientMessage = z.infer<typeof clientMessageSchema>;

/** Gatekeeper for outgoing traffic; throws on anything off-protocol. */
export function encodeClientMessage(msg: ClientMessage): string {
  return JSON.stringify(clientMessageSchema.parse(msg));
}

export function isValidClientMessage(value: unknown): boolean {
  return clientMessageSchema.safeParse(value).success;
}
