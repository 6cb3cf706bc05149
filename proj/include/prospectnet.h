/* Copyright 2026 The ProspectNet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C API of the prospectnet shared library.
 *
 * All entry points return pn_status; anything but PN_OK leaves a
 * human-readable message in pn_last_error() (thread-local, valid until the
 * next failing call on the same thread). Configs are opaque handles created
 * by pn_config_create or pn_config_load and released with
 * pn_config_destroy.
 *
 * The command functions mirror the CLI subcommands. Each reads its inputs
 * and writes its primary output plus a `<out>.manifest.json` reproduction
 * record; pass out_path = NULL to use the path from the config.
 */

#ifndef PROSPECTNET_H_
#define PROSPECTNET_H_

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pn_status {
  PN_OK = 0,
  PN_ERROR_IO = 1,
  PN_ERROR_PARSE = 2,
  PN_ERROR_VALIDATION = 3,
  PN_ERROR_CONFIG = 4,
  PN_ERROR_DIMENSION = 5,
  PN_ERROR_CONTRACT = 6,
  PN_ERROR_NOT_FOUND = 7,
  PN_ERROR_INTERNAL = 8
} pn_status;

/* Library version, e.g. "0.1.0". */
const char * pn_version(void);

/* Message of this thread's most recent failure, or "" when none. */
const char * pn_last_error(void);

typedef struct pn_config pn_config;

/* Fresh config with built-in defaults. */
pn_status pn_config_create(pn_config ** out);

/* Parses a key=value config file. */
pn_status pn_config_load(const char * path, pn_config ** out);

/* Applies one "section.key" assignment, e.g. ("optimizer.seed", "11"). */
pn_status pn_config_set(pn_config * config, const char * key, const char * value);

/* Canonical config text; release with pn_string_free. */
pn_status pn_config_text(const pn_config * config, char ** out_text);

void pn_string_free(char * text);
void pn_config_destroy(pn_config * config);

/* Synthetic scenario generation. */
pn_status pn_gen_data(const pn_config * config, const char * out_path);

/* Interactive-pair mining over the configured scenario file. */
pn_status pn_mine_pairs(const pn_config * config, const char * out_path);

/* Goal-sampling quality report across the preset table. */
pn_status pn_sample_targets(const pn_config * config, const char * out_path);

/* Per-agent predictor training; writes the marginal checkpoint. */
pn_status pn_train_marginal(const pn_config * config, const char * out_path);

/* Conditional-stage fine-tuning from the marginal checkpoint. */
pn_status pn_train_joint(const pn_config * config, const char * out_path);

/* Joint or baseline pair predictions for every mined pair. */
pn_status pn_predict(const pn_config * config, const char * out_path);

/* Scores predictions and writes the JSON report. When metrics_out is not
 * NULL it receives {minADE, minFDE, MissRate, OverlapRate, mAP}. */
pn_status pn_evaluate(const pn_config * config, const char * out_path, double metrics_out[5]);

/* SVG rendering of the first prediction record. */
pn_status pn_plot(const pn_config * config, const char * out_path);

#ifdef __cplusplus
}
#endif

#endif /* PROSPECTNET_H_ */
