export type RelevanceLabel = 'Relevant' | 'Irrelevant';

export interface LabelTaskView {
  record_id: string;
  title: string;
  description: string;
  audio_text: string;
  visual_lines: [number, string][];
  platform: string;
  remaining?: number;
}

export interface AgreementReport {
  kappa: number;
  observed_agreement: number;
  expected_agreement: number;
  confusion: [[number, number], [number, number]];
  disagreements: string[];
}

export interface ThemeEntry {
  cluster_key: string;
  product: string;
  cluster_id: number;
  size: number;
  record_ids: string[];
  top_terms: [string, number][];
  theme_name: string | null;
}

export interface SessionInfo {
  session_id: string;
}
