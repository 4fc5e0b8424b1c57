// Copyright 2026 The mdp-interp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON serialization of every mechanism kind, plus the CSV table form.

#ifndef MDP_MECHANISM_IO_H_
#define MDP_MECHANISM_IO_H_

#include <istream>
#include <memory>
#include <ostream>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mdp/apo.h"
#include "mdp/model.h"

namespace mdp {

inline constexpr char kMechanismFormat[] = "mdp-mechanism-1";

// Interpolated, cell-constant, exponential (incl. discrete Laplace),
// truncated exponential and remapped mechanisms. Other kinds are
// Unimplemented. Doubles round-trip bit-exactly.
absl::StatusOr<std::string> MechanismToJson(const PerturbationMechanism& mech);
absl::StatusOr<std::shared_ptr<const PerturbationMechanism>> MechanismFromJson(
    const std::string& text);

// Missing or unreadable files are NotFound; malformed content is
// InvalidArgument.
absl::Status WriteMechanismFile(const PerturbationMechanism& mech,
                                const std::string& path);
absl::StatusOr<std::shared_ptr<const PerturbationMechanism>> ReadMechanismFile(
    const std::string& path);

// Header "anchor,y0,...,y{K-1}", then one row per anchor with 17 significant
// digits.
void WriteTableCsv(const PerturbationTable& table, std::ostream& out);
absl::StatusOr<PerturbationTable> ReadTableCsv(std::istream& in);

}  // namespace mdp

#endif  // MDP_MECHANISM_IO_H_
