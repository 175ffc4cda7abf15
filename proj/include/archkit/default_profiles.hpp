#pragma once

#include <string_view>

namespace archkit {

// Shipped profiles. Figs. of the original profiles are published only as
// excerpts, so this set is a superset reconstruction covering every stereotype
// the workflow needs; projects extend or replace it freely.
inline constexpr std::string_view kFunctionalProfileText = R"(// Functional architecture profile
profile Functional {
  stereotype Function abstract kind component {
    attr description: string
  }
  stereotype AtomicFunction extends Function {
    attr rationale: string
    attr fdal: dal optional
  }
  stereotype FunctionGroup extends Function
  stereotype FunctionPort kind port {
    attr justification: string optional
  }
  stereotype FunctionalExchange kind connector {
    attr label: string optional
    endpoints FunctionPort
  }
}
)";

inline constexpr std::string_view kPhysicalProfileText = R"(// Physical architecture profile
profile Physical {
  stereotype PhysicalComponent abstract kind component {
    attr description: string
  }
  stereotype LRU extends PhysicalComponent {
    attr part_number: string optional
    attr fdal: dal optional
  }
  stereotype Sensor extends PhysicalComponent
  stereotype Actuator extends PhysicalComponent
  stereotype Subsystem extends PhysicalComponent
  stereotype Software_Item extends PhysicalComponent {
    attr idal: dal optional
  }
  stereotype Hardware_Item extends PhysicalComponent {
    attr idal: dal optional
  }
  stereotype PhysicalPort abstract kind port {
    attr justification: string optional
  }
  stereotype DiscretePort extends PhysicalPort
  stereotype A825Port extends PhysicalPort bidirectional {
    attr node_id: integer optional
  }
  stereotype PowerPort extends PhysicalPort
  stereotype AnalogPort extends PhysicalPort
  stereotype DiscreteLink kind connector {
    endpoints DiscretePort
  }
  stereotype A825Bus kind connector {
    endpoints A825Port
  }
  stereotype PowerLine kind connector {
    endpoints PowerPort
  }
}
)";

inline constexpr std::string_view kScaffoldManifestText = R"(project "New Project" {
  level L0
  profiles ["functional.prof", "physical.prof"]
  models ["functional.arch", "physical.arch"]
  requirements ["requirements.req"]
}
)";

inline constexpr std::string_view kScaffoldFunctionalModelText = R"(model Func {
  kind functional
  level L0
  uses Functional
}
)";

inline constexpr std::string_view kScaffoldPhysicalModelText = R"(model Phys {
  kind physical
  level L0
  uses Physical
}
)";

inline constexpr std::string_view kScaffoldRequirementsText = R"(// Requirements and trace links
)";

}  // namespace archkit
