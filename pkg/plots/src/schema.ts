import { z } from "zod";

/** JSON written by `qkr-detector fit --kind exp|sine`. */
export const FitJson = z
  .object({
    rate: z.number(),
    amplitude: z.number(),
    frequency: z.number().optional(),
    phase: z.number().optional(),
    window_lo: z.number(),
    window_hi: z.number(),
    rms_residual: z.number(),
    converged: z.boolean().optional(),
  })
  .passthrough();
export type FitJson = z.infer<typeof FitJson>;

/** JSON written by `qkr-detector fit --kind residual`. */
export const ResidualJson = z
  .object({ value: z.number(), t_lo: z.number(), t_hi: z.number() })
  .passthrough();

/** JSON written by `qkr-detector lyapunov`. */
export const LyapunovJson = z
  .object({ K_eff: z.number(), lambda: z.number(), seed: z.number() })
  .passthrough();

/** Sidecar metadata for a Husimi grid CSV. */
export const HusimiMeta = z
  .object({
    m_theta: z.number().int(),
    m_p: z.number().int(),
    d_theta: z.number(),
    d_p: z.number(),
    time: z.number(),
    component: z.string(),
  })
  .passthrough();

const SeriesInput = z.object({
  path: z.string(),
  x: z.string().default("t"),
  y: z.string(),
  label: z.string().optional(),
});

const ReferenceDecay = z.object({
  rate: z.number(),
  amplitude: z.number(),
  label: z.string().optional(),
});

const FitOverlay = z.object({
  path: z.string(),
  type: z.enum(["exp", "lyapunov"]).default("exp"),
  label: z.string().optional(),
});

export const FigureSpec = z.discriminatedUnion("kind", [
  z.object({
    id: z.string(),
    kind: z.literal("decay"),
    title: z.string().default(""),
    out: z.string(),
    inputs: z.array(SeriesInput).min(1),
    fits: z.array(FitOverlay).default([]),
    refs: z.array(ReferenceDecay).default([]),
    t_max: z.number().optional(),
    y_min: z.number().optional(),
  }),
  z.object({
    id: z.string(),
    kind: z.literal("series"),
    title: z.string().default(""),
    out: z.string(),
    inputs: z.array(SeriesInput).min(1),
    sine_fit: z.string().optional(),
    y_label: z.string().default(""),
  }),
  z.object({
    id: z.string(),
    kind: z.literal("rate_scatter"),
    title: z.string().default(""),
    out: z.string(),
    input: z.string(),
    x: z.enum(["value", "value_squared"]),
    y: z.enum(["gamma1", "gamma2"]),
    loglog: z.boolean().default(false),
    power_laws: z
      .array(
        z.object({
          coeff: z.number(),
          exponent: z.number(),
          label: z.string().optional(),
        }),
      )
      .default([]),
  }),
  z.object({
    id: z.string(),
    kind: z.literal("residual_scaling"),
    title: z.string().default(""),
    out: z.string(),
    inputs: z.array(z.object({ path: z.string(), n: z.number() })).min(2),
    reference_coeff: z.number().default(1.0),
  }),
  z.object({
    id: z.string(),
    kind: z.literal("husimi_grid"),
    title: z.string().default(""),
    out: z.string(),
    panels: z.array(z.object({ path: z.string(), label: z.string() })).min(1),
    ncols: z.number().int().min(1).default(2),
  }),
  z.object({
    id: z.string(),
    kind: z.literal("wd_panels"),
    title: z.string().default(""),
    out: z.string(),
    inputs: z
      .array(
        z.object({
          path: z.string(),
          label: z.string(),
          offset: z.number().default(0),
        }),
      )
      .min(1),
  }),
]);
export type FigureSpec = z.infer<typeof FigureSpec>;

export const FigureManifest = z.array(FigureSpec);

export const RunEntry = z.object({
  command: z.enum([
    "evolve",
    "sweep",
    "husimi",
    "wd",
    "lyapunov",
    "channel",
    "fidelity",
    "fit",
  ]),
  out: z.string(),
  config: z.record(z.unknown()),
  threads: z.number().int().min(1).optional(),
});
export type RunEntry = z.infer<typeof RunEntry>;

export const RunManifest = z.array(RunEntry);
