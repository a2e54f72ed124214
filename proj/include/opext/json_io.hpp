// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include "opext/extend.hpp"
#include "opext/operator.hpp"
#include "opext/semigroup.hpp"
#include "opext/shifts.hpp"

namespace opext::io {

using json = nlohmann::ordered_json;

// complex numbers as [re, im]; rationals as numbers when exactly
// double-representable, "p/q" strings otherwise
json complex_to_json(cplx z);
cplx complex_from_json(const json& j);
json rat_to_json(const Rat& r);
Rat rat_from_json(const json& j);

json to_json(const IndexSet& s);
IndexSet indexset_from_json(const json& j);

json to_json(const WeightSeq& w);
WeightSeq weightseq_from_json(const json& j);

json to_json(const SeqVector& v);
SeqVector seqvector_from_json(const json& j);

json to_json(const Operator& op);
Operator operator_from_json(const json& j);

json to_json(const CertifiedValue& cv);

json to_json(const SpectrumDesc& s);

json to_json(const extend::ExtensionBundle& b);
extend::ExtensionBundle bundle_from_json(const json& j);

json to_json(const shifts::SplitResult& s);

json to_json(const semi::CombParams& p);
semi::CombParams combparams_from_json(const json& j);

json to_json(const semi::SemigroupModel& m);
semi::SemigroupModel model_from_json(const json& j);

json matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const json& j);

/// Shortest round-trip decimal text of a double (to_chars).
std::string double_str(double x);

}  // namespace opext::io
