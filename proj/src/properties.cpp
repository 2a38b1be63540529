#include "iupc/properties.hpp"

namespace iupc {

DerivedProperties derive_properties(const ProcessConstraint& c) {
    DerivedProperties p;

    p.usage = c.behavior.empty() ? Usage::Compliance : Usage::Behavioral;

    p.scope = {Scope::Structure};
    if (c.condition.data) p.scope.insert(Scope::Data);
    if (!c.condition.time.empty()) p.scope.insert(Scope::Time);
    if (!c.condition.resource.empty()) p.scope.insert(Scope::Resource);
    if (c.behavior.kind == Behavior::Kind::Attribute) {
        if (c.behavior.key == "DURATION")
            p.scope.insert(Scope::Time);
        else if (c.behavior.key == "ROLE" || c.behavior.key == "ACTOR")
            p.scope.insert(Scope::Resource);
    }
    if (c.behavior.kind == Behavior::Kind::Synchronize) p.scope.insert(Scope::Resource);

    if (p.usage == Usage::Compliance) p.application.insert(Application::DesignTime);
    bool beyond_structure = p.scope.size() > 1;
    if (beyond_structure || !c.behavior.empty()) p.application.insert(Application::RunTime);

    p.origin = c.linkage.context.all_instances ? Origin::External : Origin::ThroughExecution;

    return p;
}

std::string classify_type(const ProcessConstraint& c) {
    const Behavior& b = c.behavior;
    if (b.kind == Behavior::Kind::Attribute) {
        if (b.key == "ROLE" || b.key == "ACTOR" || b.key == "NODE") return "resource-attribution";
        if (b.key == "DURATION") return "timing-attribution";
        return "generic-business-compliance";
    }
    if (b.kind == Behavior::Kind::Synchronize) return "synchronization";
    if (b.kind == Behavior::Kind::RaiseException) return "generic-business-compliance";

    bool same_actor = false, different_actor = false, role_or_resource = false;
    for (const ResourceAtom& a : c.condition.resource.atoms) {
        switch (a.kind) {
            case ResourceAtom::Kind::SameActor: same_actor = true; break;
            case ResourceAtom::Kind::DifferentActor: different_actor = true; break;
            default: role_or_resource = true; break;
        }
    }
    if (different_actor) return "separation-of-duty";
    if (same_actor) return "binding-of-duty";
    if (role_or_resource) return "access-constraint";
    if (!c.condition.time.empty()) return "temporal-compliance";
    if (c.condition.data) return "data-compliance";
    if (c.condition.empty()) return "structural-compliance";
    return "generic-business-compliance";
}

}  // namespace iupc
