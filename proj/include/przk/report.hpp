#ifndef PRZK_REPORT_HPP
#define PRZK_REPORT_HPP

#include "przk/campaign.hpp"

#include <stdexcept>
#include <string>

namespace przk::sim {

class ReportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Stored aggregate disagrees with the one re-derived from per-session rows.
class AggregateMismatch : public ReportError {
public:
    explicit AggregateMismatch(const std::string& metric)
        : ReportError("aggregate mismatch in '" + metric + "'"), metric_(metric) {}
    const std::string& metric() const { return metric_; }

private:
    std::string metric_;
};

std::string config_to_json(const CampaignConfig& config);
// Throws ConfigError naming the offending field. Missing fields keep their
// defaults.
CampaignConfig config_from_json(const std::string& text);

// Deterministic: identical reports serialize to identical bytes.
std::string report_to_json(const CampaignReport& report);
// Throws ReportError on malformed input; does not check aggregates.
CampaignReport report_from_json(const std::string& text);

// index,kind,accepted,auth_latency_ms,key_ms,entity_exp,entity_mul,entity_hash,twin_exp,twin_mul,twin_hash
std::string report_to_csv(const CampaignReport& report);

// Fixed-width summary with one row per adversary kind.
std::string report_to_table(const CampaignReport& report);

// Re-derives the aggregates from the session rows; throws AggregateMismatch
// naming the first metric that differs.
void verify_aggregates(const CampaignReport& report);

} // namespace przk::sim

#endif
