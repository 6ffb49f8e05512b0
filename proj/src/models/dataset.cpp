// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/bytecode/keccak.hpp>
#include <sctest/common/error.hpp>
#include <sctest/models/dataset.hpp>

#include <json.hpp>

#include <fstream>

namespace sctest::models
{
int label_from_outcomes(const EngineOutcome& concolic, const EngineOutcome& generator) noexcept
{
    if (concolic.new_bugs != generator.new_bugs)
        return concolic.new_bugs > generator.new_bugs ? 0 : 1;
    return concolic.new_instructions > generator.new_instructions ? 0 : 1;
}

unsigned fold_of(std::string_view contract, unsigned folds)
{
    if (folds == 0)
        throw Error(ErrorCode::InvalidConfig, "folds must be positive");
    const auto digest = bytecode::keccak256(contract);
    // Horner over the big-endian bytes keeps the remainder exact without 256-bit division.
    uint64_t r = 0;
    for (const uint8_t b : digest)
        r = (r * 256 + b) % folds;
    return static_cast<unsigned>(r);
}

std::vector<std::filesystem::path> export_finetune_dataset(const std::vector<LabeledSample>& samples, unsigned folds,
    const std::filesystem::path& out_dir)
{
    if (folds == 0)
        throw Error(ErrorCode::InvalidConfig, "folds must be positive");
    std::vector<std::string> shards(folds);
    for (const auto& s : samples)
    {
        const nlohmann::json record = {
            {"prompt", build_forecast_training_sample(s.features)},
            {"label", *s.features.ground_truth},
        };
        shards[fold_of(s.contract, folds)] += record.dump() + "\n";
    }
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> paths;
    for (unsigned k = 0; k < folds; ++k)
    {
        const auto path = out_dir / ("finetune.fold" + std::to_string(k) + ".jsonl");
        std::ofstream out{path, std::ios::binary | std::ios::trunc};
        out << shards[k];
        if (!out)
            throw Error(ErrorCode::InvalidConfig, "cannot write " + path.string());
        paths.push_back(path);
    }
    return paths;
}

}  // namespace sctest::models
