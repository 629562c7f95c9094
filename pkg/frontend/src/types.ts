// Payload shapes of the knowledge-base API (docs/api.md in the repo root).

export interface ChipsetRef {
  manufacturer: string;
  model_number: string;
}

export interface DeviceRow {
  device_id: string;
  oem: string;
  device_name: string;
  chipset: ChipsetRef | null;
  release_date: string;
}

export interface Page<T> {
  total: number;
  offset: number;
  items: T[];
}

export interface ChipsetRow extends ChipsetRef {
  release_date: string | null;
  marketing_name: string | null;
  vulnerability_count: number;
  device_count: number;
}

export interface ChipsetDetail extends ChipsetRef {
  release_date: string | null;
  marketing_name: string | null;
  vulnerabilities: string[];
  devices: string[];
}

export interface DeviceUpdateRow {
  release_date: string;
  spl_date: string | null;
  explicit_cves: string[];
}

export interface DeviceDetail extends DeviceRow {
  updates: DeviceUpdateRow[];
  vulnerabilities: string[];
  first_mitigation: Record<string, string>;
}

export interface SourceRecord {
  vantage_point: string;
  source: string;
  publication_date: string;
  severity: number | null;
  severity_version: string | null;
  severity_label: string | null;
  description: string;
  affected_chipset_strings: string[];
  credit: string | null;
  internal_flag: boolean | null;
  report_date: string | null;
}

export interface VulnerabilityDetail {
  cve: string;
  component: string;
  location: string;
  attribution: string;
  patch_date: string | null;
  report_date: string | null;
  affected_chipsets: ChipsetRef[];
  affected_smartphone_count: number;
  affected_smartphones: string[];
  per_oem: Record<string, number>;
  records: SourceRecord[];
  warning: string | null;
}

export interface PickFilters {
  oems?: string[];
  manufacturers?: string[];
  released_from?: string;
  released_to?: string;
}

export interface PickRequestBody extends PickFilters {
  k: number;
  locked?: string[];
}

export interface PickSelectionEntry {
  device_id: string;
  oem: string;
  device_name: string;
  chipset: ChipsetRef | null;
  release_date: string;
  locked: boolean;
  marginal_gain: number;
  coverage: number;
}

export interface PickResult {
  selection: PickSelectionEntry[];
  total_covered: number;
  overlap_matrix: number[][];
  candidate_count: number;
  truncated: boolean;
}

export interface ApiError {
  status: number;
  code: string;
  message: string;
}
