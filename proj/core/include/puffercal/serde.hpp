//
// Copyright 2026 The Puffercal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef PUFFERCAL_SERDE_HPP_
#define PUFFERCAL_SERDE_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "puffercal/calibrate.hpp"
#include "puffercal/dist.hpp"
#include "puffercal/ingest.hpp"
#include "puffercal/verify.hpp"

// JSON text conversions for every wire format the toolkit reads or writes.
// Malformed text raises ValidationError with the parser message.
//
// Distribution:  {"support":[1,2], "mass":[0.5,0.5]}
// SystemConfig:  {"users":[{"id":"u1","presence":1.0,"distribution":{...}}]}
// Secret pair, inferred from its fields ("user" optional for closed forms):
//   {"user":"u4","a":5,"b":3}      value pair
//   {"user":"u4","a":5}            value vs absent
//   {"user":"u4","P":{...}}        distribution vs absent
//   {"user":"u4","P":{...},"Q":{...}}  distribution pair
// Codec: {"column":"race","codes":{"White":1,"Black":2}}

namespace puffercal::serde {

DiscreteDistribution distribution_from_json(std::string_view text);
std::string to_json(const DiscreteDistribution& dist, int indent = -1);

SystemConfig config_from_json(std::string_view text);
std::string to_json(const SystemConfig& config, int indent = -1);

SecretPair secret_pair_from_json(std::string_view text);
std::vector<SecretPair> secret_pairs_from_json(std::string_view text);
std::string to_json(const SecretPair& pair, int indent = -1);

CategoryCodec codec_from_json(std::string_view text);
std::string to_json(const CategoryCodec& codec, int indent = -1);

std::string to_json(const CalibrationResult& result, double epsilon,
                    int indent = -1);
std::string to_json(const VerificationReport& report, int indent = -1);

}  // namespace puffercal::serde

#endif  // PUFFERCAL_SERDE_HPP_
