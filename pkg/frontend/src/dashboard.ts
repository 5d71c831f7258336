/**
 * Requester dashboard view model.
 *
 * Strict pass-through: every figure equals the analytics endpoint
 * value, no client-side recomputation. The only derived strings are
 * display formatting (alpha to four decimals, "undefined" when the
 * metric has no value) and the stale flag raised when a refresh fails
 * and the page keeps showing the previous snapshot.
 */

import type { AgreementEntry, DashboardPayload } from "./types";

export interface FunnelStage {
  label: string;
  value: number;
}

export interface HistogramBar {
  chains: number;
  pairs: number;
}

export interface AgreementView extends AgreementEntry {
  display: string;
}

export interface DashboardModel {
  snapshotId: string;
  funnel: FunnelStage[];
  stats: {
    collected: Record<string, number>;
    kept: Record<string, number>;
  };
  coverage: {
    collected: HistogramBar[];
    kept: HistogramBar[];
  };
  agreement: {
    validity: AgreementView;
    scores: AgreementView;
  };
  stale: boolean;
}

/** Four decimals, or the word "undefined" when there is no value to
 * show (constant vote matrices leave alpha undefined). */
export function formatAlpha(alpha: number | null): string {
  return alpha === null ? "undefined" : alpha.toFixed(4);
}

function bars(histogram: Record<string, number>): HistogramBar[] {
  return Object.keys(histogram)
    .map(Number)
    .sort((a, b) => a - b)
    .map((chains) => ({ chains, pairs: histogram[String(chains)] as number }));
}

function agreementView(entry: AgreementEntry): AgreementView {
  return { ...entry, display: formatAlpha(entry.alpha) };
}

export function buildDashboard(payload: DashboardPayload): DashboardModel {
  return {
    snapshotId: payload.snapshot_id,
    funnel: payload.funnel.rows.map(([label, value]) => ({ label, value })),
    stats: payload.stats,
    coverage: {
      collected: bars(payload.coverage.collected),
      kept: bars(payload.coverage.kept),
    },
    agreement: {
      validity: agreementView(payload.agreement.validity),
      scores: agreementView(payload.agreement.scores),
    },
    stale: false,
  };
}

/**
 * Fetch-and-rebuild with graceful degradation: when the loader fails
 * and a previous model exists, that model is returned marked stale so
 * the page can keep its numbers up behind a warning banner. With no
 * previous data the failure propagates.
 */
export async function refreshDashboard(
  load: () => Promise<DashboardPayload>,
  previous: DashboardModel | null = null,
): Promise<DashboardModel> {
  try {
    return buildDashboard(await load());
  } catch (error) {
    if (previous !== null) return { ...previous, stale: true };
    throw error;
  }
}
