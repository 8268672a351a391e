#pragma once

#include <string>
#include <string_view>

namespace revguard {

enum class DetectorKind { TF, RR };
enum class Label { HUMAN, AI };

std::string_view to_string(DetectorKind d);
std::string_view to_string(Label l);
DetectorKind parse_detector(std::string_view s);

struct DetectionVerdict {
    std::string review_id;
    DetectorKind detector = DetectorKind::TF;
    double probability_ai = 0.0;
    Label label = Label::HUMAN;
    double threshold_used = 0.5;
};

/// AI exactly when probability >= threshold.
DetectionVerdict make_verdict(std::string review_id, DetectorKind detector, double probability, double threshold);

}  // namespace revguard
