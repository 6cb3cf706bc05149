// Copyright 2026 The ProspectNet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "prospectnet.h"

#include <cstring>
#include <iostream>
#include <string>

#include "prospectnet/errors.hpp"
#include "prospectnet/pipeline.hpp"
#include "prospectnet/run_config.hpp"

struct pn_config
{
  prospectnet::RunConfig config;
};

namespace
{

thread_local std::string g_last_error;

pn_status status_from(prospectnet::ErrorCode code)
{
  switch (code) {
    case prospectnet::ErrorCode::kIo: return PN_ERROR_IO;
    case prospectnet::ErrorCode::kParse: return PN_ERROR_PARSE;
    case prospectnet::ErrorCode::kValidation: return PN_ERROR_VALIDATION;
    case prospectnet::ErrorCode::kConfig: return PN_ERROR_CONFIG;
    case prospectnet::ErrorCode::kDimension: return PN_ERROR_DIMENSION;
    case prospectnet::ErrorCode::kContract: return PN_ERROR_CONTRACT;
    case prospectnet::ErrorCode::kNotFound: return PN_ERROR_NOT_FOUND;
    case prospectnet::ErrorCode::kInternal: return PN_ERROR_INTERNAL;
  }
  return PN_ERROR_INTERNAL;
}

template <typename Fn>
pn_status guarded(Fn && fn)
{
  try {
    fn();
    g_last_error.clear();
    return PN_OK;
  } catch (const prospectnet::Error & e) {
    g_last_error = e.what();
    return status_from(e.code());
  } catch (const std::exception & e) {
    g_last_error = e.what();
    return PN_ERROR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return PN_ERROR_INTERNAL;
  }
}

pn_status null_argument(const char * what)
{
  g_last_error = std::string(what) + " must not be NULL";
  return PN_ERROR_CONTRACT;
}

std::string out_or_config(const char * out_path)
{
  return out_path == nullptr ? std::string() : std::string(out_path);
}

}  // namespace

extern "C" {

const char * pn_version(void)
{
  return "0.1.0";
}

const char * pn_last_error(void)
{
  return g_last_error.c_str();
}

pn_status pn_config_create(pn_config ** out)
{
  if (out == nullptr) {
    return null_argument("out");
  }
  return guarded([&] { *out = new pn_config{}; });
}

pn_status pn_config_load(const char * path, pn_config ** out)
{
  if (path == nullptr) {
    return null_argument("path");
  }
  if (out == nullptr) {
    return null_argument("out");
  }
  *out = nullptr;
  return guarded([&] { *out = new pn_config{prospectnet::load_run_config(path)}; });
}

pn_status pn_config_set(pn_config * config, const char * key, const char * value)
{
  if (config == nullptr) {
    return null_argument("config");
  }
  if (key == nullptr || value == nullptr) {
    return null_argument("key and value");
  }
  return guarded([&] { prospectnet::set_config_value(config->config, key, value); });
}

pn_status pn_config_text(const pn_config * config, char ** out_text)
{
  if (config == nullptr) {
    return null_argument("config");
  }
  if (out_text == nullptr) {
    return null_argument("out_text");
  }
  return guarded([&] {
    const std::string text = prospectnet::serialize_run_config(config->config);
    *out_text = new char[text.size() + 1];
    std::memcpy(*out_text, text.c_str(), text.size() + 1);
  });
}

void pn_string_free(char * text)
{
  delete[] text;
}

void pn_config_destroy(pn_config * config)
{
  delete config;
}

pn_status pn_gen_data(const pn_config * config, const char * out_path)
{
  if (config == nullptr) {
    return null_argument("config");
  }
  return guarded(
    [&] { prospectnet::run_gen_data(config->config, out_or_config(out_path), std::cout); });
}

pn_status pn_mine_pairs(const pn_config * config, const char * out_path)
{
  if (config == nullptr) {
    return null_argument("config");
  }
  return guarded(
    [&] { prospectnet::run_mine_pairs(config->config, out_or_config(out_path), std::cout); });
}

pn_status pn_sample_targets(const pn_config * config, const char * out_path)
{
  if (config == nullptr) {
    return null_argument("config");
  }
  return guarded(
    [&] { prospectnet::run_sample_targets(config->config, out_or_config(out_path), std::cout); });
}

pn_status pn_train_marginal(const pn_config * config, const char * out_path)
{
  if (config == nullptr) {
    return null_argument("config");
  }
  return guarded(
    [&] { prospectnet::run_train_marginal(config->config, out_or_config(out_path), std::cout); });
}

pn_status pn_train_joint(const pn_config * config, const char * out_path)
{
  if (config == nullptr) {
    return null_argument("config");
  }
  return guarded(
    [&] { prospectnet::run_train_joint(config->config, out_or_config(out_path), std::cout); });
}

pn_status pn_predict(const pn_config * config, const char * out_path)
{
  if (config == nullptr) {
    return null_argument("config");
  }
  return guarded(
    [&] { prospectnet::run_predict(config->config, out_or_config(out_path), std::cout); });
}

pn_status pn_evaluate(const pn_config * config, const char * out_path, double metrics_out[5])
{
  if (config == nullptr) {
    return null_argument("config");
  }
  return guarded([&] {
    const prospectnet::MetricsReport report =
      prospectnet::run_evaluate(config->config, out_or_config(out_path), std::cout);
    if (metrics_out != nullptr) {
      metrics_out[0] = report.min_ade;
      metrics_out[1] = report.min_fde;
      metrics_out[2] = report.miss_rate;
      metrics_out[3] = report.overlap_rate;
      metrics_out[4] = report.map;
    }
  });
}

pn_status pn_plot(const pn_config * config, const char * out_path)
{
  if (config == nullptr) {
    return null_argument("config");
  }
  return guarded([&] { prospectnet::run_plot(config->config, out_or_config(out_path), std::cout); });
}

}  // extern "C"
