#include "revguard/detection.hpp"

#include "revguard/errors.hpp"
#include "revguard/text.hpp"

namespace revguard {

std::string_view to_string(DetectorKind d) { return d == DetectorKind::TF ? "TF" : "RR"; }

std::string_view to_string(Label l) { return l == Label::AI ? "AI" : "HUMAN"; }

DetectorKind parse_detector(std::string_view s) {
    const auto lower = text::to_lower(s);
    if (lower == "tf") return DetectorKind::TF;
    if (lower == "rr") return DetectorKind::RR;
    throw ParseError("unknown detector '" + std::string(s) + "'");
}

DetectionVerdict make_verdict(std::string review_id, DetectorKind detector, double probability, double threshold) {
    DetectionVerdict v;
    v.review_id = std::move(review_id);
    v.detector = detector;
    v.probability_ai = probability;
    v.threshold_used = threshold;
    v.label = probability >= threshold ? Label::AI : Label::HUMAN;
    return v;
}

}  // namespace revguard
