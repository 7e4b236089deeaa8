"""Built-in measurement index: the five-level agility scale as data tables.

The tables below define the default index instance: five levels, five
principles, 40 practices placed on the level x principle grid (nine of them
limiting), three discontinuing factors, and an illustrative characteristic /
indicator catalog that makes every practice and factor assessable end to end.

Catalog entries carry an `origin` tag: "core" marks characteristics and
questions the framework's published materials spell out, "authored" marks
illustrative entries written for this package so the pipeline is fully
exercisable. Tailored indices are free to replace any of it; see
data/index.schema.json for the file format.
"""

from __future__ import annotations

from typing import Any

INDEX_NAME = "default"
INDEX_VERSION = "1.0.0"

# (rank, name, objective)
LEVELS = (
    (1, "Collaborative", "Enhancing communication and collaboration"),
    (2, "Evolutionary", "Delivering software early and continuously"),
    (3, "Effective", "Developing high quality, working software in an efficient and effective manner"),
    (4, "Adaptive", "Responding to change through multiple levels of feedback"),
    (5, "Ambient", "Establishing a vibrant environment to sustain agility"),
)

# (id, name) — declaration order is the grid's column order and the
# tie-break order used when sorting practices within a level.
PRINCIPLES = (
    ("embrace-change", "Embrace change to deliver customer value"),
    ("deliver-frequently", "Plan and deliver software frequently"),
    ("human-centric", "Human centric"),
    ("technical-excellence", "Technical excellence"),
    ("customer-collaboration", "Customer collaboration"),
)

ORG = "organizational"
PROJ = "project"

# (id, description, scope, controllable, origin)
CHARACTERISTICS = (
    # -- collaborative planning (core set) --
    ("transparency-of-management", "Transparency of management", ORG, True, "core"),
    ("small-power-distance", "Small power-distance in the organization", ORG, False, "core"),
    ("developers-buy-in", "Developers buy-in", ORG, True, "core"),
    ("collaborative-management-style", "Collaborative management style", ORG, True, "core"),
    ("management-buy-in", "Management buy-in", ORG, True, "core"),
    # -- coding standards (core set) --
    ("coding-standards-benefits-understood", "Developers understand the benefits of coding standards", ORG, True, "core"),
    ("coding-standards-willingness", "Developers willingness to conform to coding standards", ORG, True, "core"),
    # -- level 1, authored --
    ("retrospective-culture", "Willingness to regularly reflect on and tune the process", ORG, True, "authored"),
    ("team-collaboration-habits", "Existing collaboration habits within and across teams", ORG, True, "authored"),
    ("team-empowerment", "Teams are trusted with decisions about their own work", ORG, True, "authored"),
    ("knowledge-sharing-infrastructure", "Tools and habits for capturing and sharing knowledge", ORG, True, "authored"),
    ("task-self-selection", "Work is taken on by volunteering rather than assignment", ORG, True, "authored"),
    ("customer-commitment", "Customer commitment to work with the developing team", PROJ, False, "authored"),
    # -- level 2, authored --
    ("requirements-flexibility", "Requirements may evolve instead of being fixed up front", ORG, True, "authored"),
    ("incremental-release-capability", "Ability to release working software in small increments", ORG, True, "authored"),
    ("multi-horizon-planning", "Planning happens at release, iteration and daily horizons", ORG, True, "authored"),
    ("version-control-discipline", "Disciplined use of version control for all work products", ORG, True, "authored"),
    ("progress-visibility", "Iteration progress is visible and tracked", ORG, True, "authored"),
    ("incremental-design-acceptance", "Design is allowed to grow with the system instead of being fixed up front", ORG, True, "authored"),
    ("evolutionary-contract-terms", "Contract terms accommodate evolutionary delivery", PROJ, False, "authored"),
    # -- level 3, authored except near team proximity --
    ("risk-based-prioritization", "Iteration content is chosen to burn down risk", ORG, True, "authored"),
    ("feature-oriented-planning", "Plans are expressed as customer-visible features", ORG, True, "authored"),
    ("backlog-discipline", "A current, ordered list of all features and their status exists", ORG, True, "authored"),
    ("team-self-organization", "Teams organize their own work without task-level direction", ORG, True, "authored"),
    ("near-team-proximity", "Near team proximity", PROJ, False, "core"),
    ("integration-automation", "Code is integrated and verified automatically and often", ORG, True, "authored"),
    ("refactoring-acceptance", "Improving existing code is treated as normal, budgeted work", ORG, True, "authored"),
    ("unit-testing-practice", "Developers write and run unit tests as part of the work", ORG, True, "authored"),
    ("experienced-practitioner-share", "Share of seasoned practitioners available to the team", PROJ, False, "authored"),
    # -- level 4, authored --
    ("client-steering", "Clients steer what each iteration delivers", ORG, True, "authored"),
    ("satisfaction-feedback-loop", "Customer satisfaction is measured and fed back continuously", ORG, True, "authored"),
    ("release-cadence-capability", "Organization can absorb releases every 4 to 8 weeks", ORG, True, "authored"),
    ("plan-adaptation", "Plans are expected to change as feedback arrives", ORG, True, "authored"),
    ("daily-sync-willingness", "Team willing and able to meet briefly every day", ORG, True, "authored"),
    ("lean-documentation-attitude", "Documentation is kept lean and purposeful", ORG, True, "authored"),
    ("user-story-readiness", "Requirements can be captured as short user-centric stories", ORG, True, "authored"),
    ("customer-onsite-availability", "Customer reachable immediately when questions arise", PROJ, False, "authored"),
    ("collaborative-contract-terms", "Contract is built around collaboration commitments", PROJ, False, "authored"),
    # -- level 5, authored --
    ("ceremony-tolerance", "Organization tolerates minimal mandatory process artifacts", ORG, True, "authored"),
    ("relative-estimation-capability", "Estimation uses team-based, experience-driven techniques", ORG, True, "authored"),
    ("physical-workspace-availability", "Workspace can be arranged for open collaboration", PROJ, False, "authored"),
    ("facilities-investment-willingness", "Willingness to invest in the team's physical environment", ORG, True, "authored"),
    ("test-first-readiness", "Developers prepared to write tests before code", ORG, True, "authored"),
    ("pairing-acceptance", "Working in pairs is acceptable to developers and management", ORG, True, "authored"),
    ("team-skill-floor", "Team free of members who cannot follow the method even with coaching", PROJ, False, "authored"),
    ("developer-user-collocation", "Developers and users collocated for frequent interaction", PROJ, False, "authored"),
    # -- discontinuing factors --
    ("funds-allocated", "Sufficient funds allocated to the adoption effort", ORG, True, "core"),
    ("funds-spendable", "Ability to spend the allocated funds on process improvement", ORG, True, "core"),
    ("executive-sponsorship", "Committed support from executive sponsors", ORG, False, "core"),
    ("agility-business-value", "Business value expected from increased agility", ORG, False, "authored"),
)

LIKERT = "likert5"
BINARY = "binary"
PERCENT = "percent"

# (id, question, characteristic, role, kind, weight, origin)
INDICATORS = (
    ("transparency-of-management-1", "To what extent does management share project goals, constraints and priorities with the whole team?", "transparency-of-management", "developer", LIKERT, 1, "authored"),
    ("transparency-of-management-2", "To what extent are planning decisions and their reasons visible to everyone on the team?", "transparency-of-management", "developer", LIKERT, 1, "authored"),
    ("small-power-distance-1", "How comfortable are team members challenging decisions made by their superiors?", "small-power-distance", "developer", LIKERT, 1, "authored"),
    ("small-power-distance-2", "To what extent can individuals raise concerns to management without fear of repercussions?", "small-power-distance", "assessor", LIKERT, 1, "authored"),
    ("developers-buy-in-1", "How willing are you to take part in planning sessions alongside management and customers?", "developers-buy-in", "developer", LIKERT, 1, "authored"),
    ("developers-buy-in-2", "To what extent do developers see value in shared planning rather than receiving a fixed plan?", "developers-buy-in", "developer", LIKERT, 1, "authored"),
    ("collaborative-management-style-1", "To what extent does management invite the team into decisions rather than handing them down?", "collaborative-management-style", "assessor", LIKERT, 1, "authored"),
    ("collaborative-management-style-2", "How often are estimates negotiated with the team rather than imposed on it?", "collaborative-management-style", "developer", LIKERT, 1, "authored"),
    ("management-buy-in-1", "How committed is management to adopting this way of working?", "management-buy-in", "manager", LIKERT, 1, "authored"),
    ("management-buy-in-2", "Has management agreed to attend and support collaborative planning sessions?", "management-buy-in", "manager", BINARY, 1, "authored"),
    ("coding-standards-benefits-understood-1", "To what extent do you understand the benefits the team gains from shared coding standards?", "coding-standards-benefits-understood", "developer", LIKERT, 1, "authored"),
    ("coding-standards-benefits-understood-2", "Can you name concrete problems that coding standards have prevented or would prevent here?", "coding-standards-benefits-understood", "developer", BINARY, 1, "authored"),
    ("coding-standards-willingness-1", "To what extent would you abide by coding standards even when under a time constraint?", "coding-standards-willingness", "developer", LIKERT, 2, "core"),
    ("coding-standards-willingness-2", "How willing are you to have your code reviewed against a shared standard?", "coding-standards-willingness", "developer", LIKERT, 1, "authored"),
    ("retrospective-culture-1", "To what extent does the team openly discuss what is and is not working in the current process?", "retrospective-culture", "developer", LIKERT, 1, "authored"),
    ("retrospective-culture-2", "How willing is management to let teams change their own process based on lessons learned?", "retrospective-culture", "manager", LIKERT, 1, "authored"),
    ("team-collaboration-habits-1", "How often do team members work together on a task rather than strictly alone?", "team-collaboration-habits", "developer", LIKERT, 1, "authored"),
    ("team-collaboration-habits-2", "To what extent is helping a teammate seen as part of everyone's job?", "team-collaboration-habits", "developer", LIKERT, 1, "authored"),
    ("team-empowerment-1", "How much freedom does the team have in deciding how work gets done?", "team-empowerment", "developer", LIKERT, 1, "authored"),
    ("team-empowerment-2", "To what extent are teams held to outcomes rather than prescribed steps?", "team-empowerment", "manager", LIKERT, 1, "authored"),
    ("knowledge-sharing-infrastructure-1", "Does the team have a shared place, such as a wiki, where project knowledge is kept current?", "knowledge-sharing-infrastructure", "developer", BINARY, 1, "authored"),
    ("knowledge-sharing-infrastructure-2", "How easy is it to find what a teammate already learned about a problem?", "knowledge-sharing-infrastructure", "developer", LIKERT, 1, "authored"),
    ("task-self-selection-1", "How often do team members pick their next task themselves rather than having it assigned?", "task-self-selection", "developer", LIKERT, 1, "authored"),
    ("task-self-selection-2", "How comfortable is management letting people volunteer for tasks instead of assigning them?", "task-self-selection", "manager", LIKERT, 1, "authored"),
    ("customer-commitment-1", "How committed is the customer to working with the team throughout development?", "customer-commitment", "assessor", LIKERT, 1, "authored"),
    ("customer-commitment-2", "Has the customer agreed to take part in planning and review meetings?", "customer-commitment", "manager", BINARY, 1, "authored"),
    ("requirements-flexibility-1", "To what extent can requirements be refined after development starts without a formal change battle?", "requirements-flexibility", "manager", LIKERT, 1, "authored"),
    ("requirements-flexibility-2", "To what extent are late requirement changes treated as normal learning rather than analysis failure?", "requirements-flexibility", "assessor", LIKERT, 1, "authored"),
    ("incremental-release-capability-1", "To what extent can the team ship a small, working slice of the product on demand?", "incremental-release-capability", "developer", LIKERT, 1, "authored"),
    ("incremental-release-capability-2", "In what percentage of recent iterations did a releasable build exist at the end?", "incremental-release-capability", "manager", PERCENT, 1, "authored"),
    ("multi-horizon-planning-1", "To what extent does planning happen at several horizons, such as release, iteration and day, rather than one big plan?", "multi-horizon-planning", "manager", LIKERT, 1, "authored"),
    ("multi-horizon-planning-2", "Do separate release-level and iteration-level plans exist for current work?", "multi-horizon-planning", "assessor", BINARY, 1, "authored"),
    ("version-control-discipline-1", "Is all source code kept under version control?", "version-control-discipline", "developer", BINARY, 2, "authored"),
    ("version-control-discipline-2", "What percentage of non-code work products, such as configs and scripts, is under version control?", "version-control-discipline", "developer", PERCENT, 1, "authored"),
    ("version-control-discipline-3", "How confident are you that any past release can be rebuilt from version control alone?", "version-control-discipline", "developer", LIKERT, 1, "authored"),
    ("progress-visibility-1", "Is there a visible, current picture of what is done and what remains in this iteration?", "progress-visibility", "developer", BINARY, 1, "authored"),
    ("progress-visibility-2", "How much do you trust the team's progress picture when making commitments?", "progress-visibility", "manager", LIKERT, 1, "authored"),
    ("incremental-design-acceptance-1", "To what extent is it acceptable to start building with a partial design and evolve it?", "incremental-design-acceptance", "developer", LIKERT, 1, "authored"),
    ("incremental-design-acceptance-2", "How comfortable is management approving work that lacks a complete up-front design document?", "incremental-design-acceptance", "manager", LIKERT, 1, "authored"),
    ("evolutionary-contract-terms-1", "Does the current contract allow scope to be renegotiated between deliveries?", "evolutionary-contract-terms", "assessor", BINARY, 1, "authored"),
    ("evolutionary-contract-terms-2", "To what extent does the contract pay for working increments rather than a single final delivery?", "evolutionary-contract-terms", "assessor", LIKERT, 1, "authored"),
    ("risk-based-prioritization-1", "To what extent are the riskiest parts of the system tackled in the earliest iterations?", "risk-based-prioritization", "manager", LIKERT, 1, "authored"),
    ("risk-based-prioritization-2", "Is a list of project risks consulted when picking the next iteration's content?", "risk-based-prioritization", "assessor", BINARY, 1, "authored"),
    ("feature-oriented-planning-1", "To what extent are plans written in terms of customer-visible features rather than engineering tasks?", "feature-oriented-planning", "manager", LIKERT, 1, "authored"),
    ("feature-oriented-planning-2", "How clearly does each plan item describe value a user would recognize?", "feature-oriented-planning", "developer", LIKERT, 1, "authored"),
    ("backlog-discipline-1", "Is there a single list that holds every known feature with its current status?", "backlog-discipline", "manager", BINARY, 1, "authored"),
    ("backlog-discipline-2", "To what extent does that list reflect decisions made within the last week?", "backlog-discipline", "manager", LIKERT, 1, "authored"),
    ("team-self-organization-1", "To what extent does the team decide internally who works on what?", "team-self-organization", "developer", LIKERT, 1, "authored"),
    ("team-self-organization-2", "How willing is management to state the goal and leave the how to the team?", "team-self-organization", "manager", LIKERT, 1, "authored"),
    ("near-team-proximity-1", "Are team members located near enough to each other to talk face to face every day?", "near-team-proximity", "assessor", BINARY, 1, "authored"),
    ("near-team-proximity-2", "What percentage of the team works in the same physical location?", "near-team-proximity", "assessor", PERCENT, 1, "authored"),
    ("integration-automation-1", "Does an automated build run on every integration of new code?", "integration-automation", "developer", BINARY, 1, "authored"),
    ("integration-automation-2", "To what extent is an integration failure treated as something to fix immediately?", "integration-automation", "developer", LIKERT, 1, "authored"),
    ("refactoring-acceptance-1", "To what extent can you improve working code's structure without needing special permission?", "refactoring-acceptance", "developer", LIKERT, 1, "authored"),
    ("refactoring-acceptance-2", "How acceptable is it to spend part of each iteration improving existing code?", "refactoring-acceptance", "manager", LIKERT, 1, "authored"),
    ("unit-testing-practice-1", "What percentage of new code is covered by unit tests written alongside it?", "unit-testing-practice", "developer", PERCENT, 1, "authored"),
    ("unit-testing-practice-2", "To what extent are unit tests expected as part of calling work done?", "unit-testing-practice", "developer", LIKERT, 1, "authored"),
    ("experienced-practitioner-share-1", "What percentage of the team can adapt the method to new situations without guidance?", "experienced-practitioner-share", "assessor", PERCENT, 1, "authored"),
    ("experienced-practitioner-share-2", "To what extent does the team include members who have led this way of working before?", "experienced-practitioner-share", "assessor", LIKERT, 1, "authored"),
    ("client-steering-1", "To what extent does the client choose what the next iteration will deliver?", "client-steering", "manager", LIKERT, 1, "authored"),
    ("client-steering-2", "Did the client pick the content of the most recent iteration?", "client-steering", "assessor", BINARY, 1, "authored"),
    ("satisfaction-feedback-loop-1", "Is customer satisfaction gathered at least once per iteration?", "satisfaction-feedback-loop", "manager", BINARY, 1, "authored"),
    ("satisfaction-feedback-loop-2", "To what extent do satisfaction signals change what gets built next?", "satisfaction-feedback-loop", "manager", LIKERT, 1, "authored"),
    ("release-cadence-capability-1", "To what extent can downstream functions such as operations and support absorb a release every 4 to 8 weeks?", "release-cadence-capability", "manager", LIKERT, 1, "authored"),
    ("release-cadence-capability-2", "What percentage of recent releases shipped within an 8-week cadence?", "release-cadence-capability", "manager", PERCENT, 1, "authored"),
    ("plan-adaptation-1", "To what extent are plans revised when feedback contradicts them, rather than defended?", "plan-adaptation", "manager", LIKERT, 1, "authored"),
    ("plan-adaptation-2", "How routine is it for iteration plans to differ from the original release plan because of learning?", "plan-adaptation", "assessor", LIKERT, 1, "authored"),
    ("daily-sync-willingness-1", "How willing is the team to meet for a short daily progress conversation?", "daily-sync-willingness", "developer", LIKERT, 1, "authored"),
    ("daily-sync-willingness-2", "Can the whole team be available at a common time each day?", "daily-sync-willingness", "developer", BINARY, 1, "authored"),
    ("lean-documentation-attitude-1", "To what extent is documentation judged by usefulness rather than completeness?", "lean-documentation-attitude", "manager", LIKERT, 1, "authored"),
    ("lean-documentation-attitude-2", "How acceptable is it to drop documents that nobody reads?", "lean-documentation-attitude", "developer", LIKERT, 1, "authored"),
    ("user-story-readiness-1", "To what extent can current requirements be expressed as short stories of user value?", "user-story-readiness", "developer", LIKERT, 1, "authored"),
    ("user-story-readiness-2", "How comfortable are stakeholders replacing requirement documents with conversations around stories?", "user-story-readiness", "manager", LIKERT, 1, "authored"),
    ("customer-onsite-availability-1", "Can the team reach a decision-making customer within minutes during working hours?", "customer-onsite-availability", "assessor", BINARY, 1, "authored"),
    ("customer-onsite-availability-2", "To what extent is a customer representative effectively part of the team's daily environment?", "customer-onsite-availability", "assessor", LIKERT, 1, "authored"),
    ("collaborative-contract-terms-1", "Does the contract commit the customer to ongoing collaboration rather than only specifying deliverables?", "collaborative-contract-terms", "assessor", BINARY, 1, "authored"),
    ("collaborative-contract-terms-2", "To what extent does the contract reward joint discovery over fixed scope?", "collaborative-contract-terms", "assessor", LIKERT, 1, "authored"),
    ("ceremony-tolerance-1", "To what extent can a project run with only the artifacts it finds useful?", "ceremony-tolerance", "assessor", LIKERT, 1, "authored"),
    ("ceremony-tolerance-2", "To what extent can approvals be obtained without multi-layer sign-off chains?", "ceremony-tolerance", "manager", LIKERT, 1, "authored"),
    ("relative-estimation-capability-1", "To what extent does the whole team estimate work together rather than one expert alone?", "relative-estimation-capability", "developer", LIKERT, 1, "authored"),
    ("relative-estimation-capability-2", "Are estimates revisited against actuals at the end of each iteration?", "relative-estimation-capability", "assessor", BINARY, 1, "authored"),
    ("physical-workspace-availability-1", "Can the workspace be rearranged into an open, shared team area?", "physical-workspace-availability", "assessor", BINARY, 1, "authored"),
    ("physical-workspace-availability-2", "To what extent does the current space support spontaneous whole-team conversation?", "physical-workspace-availability", "assessor", LIKERT, 1, "authored"),
    ("facilities-investment-willingness-1", "How willing is the organization to spend on reshaping the team's workspace?", "facilities-investment-willingness", "manager", LIKERT, 1, "authored"),
    ("facilities-investment-willingness-2", "Has budget ever been granted for workspace changes a team asked for?", "facilities-investment-willingness", "manager", BINARY, 1, "authored"),
    ("test-first-readiness-1", "How willing are you to write the test before the code it verifies?", "test-first-readiness", "developer", LIKERT, 1, "authored"),
    ("test-first-readiness-2", "To what extent does the team see failing tests as the natural starting point of work?", "test-first-readiness", "developer", LIKERT, 1, "authored"),
    ("pairing-acceptance-1", "How comfortable are you working in a pair at one workstation for most of the day?", "pairing-acceptance", "developer", LIKERT, 1, "authored"),
    ("pairing-acceptance-2", "To what extent does management accept two people on one task as productive work?", "pairing-acceptance", "manager", LIKERT, 1, "authored"),
    ("team-skill-floor-1", "To what extent can every team member at least follow the practices with coaching?", "team-skill-floor", "assessor", LIKERT, 1, "authored"),
    ("team-skill-floor-2", "What percentage of the team can reliably perform the method's basic practices unaided?", "team-skill-floor", "assessor", PERCENT, 1, "authored"),
    ("developer-user-collocation-1", "Do developers and actual users share a location often enough to talk daily?", "developer-user-collocation", "assessor", BINARY, 1, "authored"),
    ("developer-user-collocation-2", "To what extent can developers walk over to a user to resolve a question?", "developer-user-collocation", "assessor", LIKERT, 1, "authored"),
    ("funds-allocated-1", "Has a budget been allocated specifically for the process improvement effort?", "funds-allocated", "manager", BINARY, 1, "authored"),
    ("funds-allocated-2", "How adequate is the allocated budget for the planned scope of change?", "funds-allocated", "manager", LIKERT, 1, "authored"),
    ("funds-spendable-1", "Can the funds be spent towards any process improvement activity?", "funds-spendable", "manager", BINARY, 1, "core"),
    ("funds-spendable-2", "Are the funds free of restrictions on the types of activities they can be used for?", "funds-spendable", "manager", BINARY, 1, "authored"),
    ("executive-sponsorship-1", "How strongly do executive sponsors back the move to the new way of working?", "executive-sponsorship", "assessor", LIKERT, 1, "authored"),
    ("executive-sponsorship-2", "Has an executive sponsor publicly committed to the adoption effort?", "executive-sponsorship", "manager", BINARY, 1, "authored"),
    ("agility-business-value-1", "To what extent would faster delivery of working software add value for your customers?", "agility-business-value", "manager", LIKERT, 1, "authored"),
    ("agility-business-value-2", "To what extent do current projects suffer from late feedback or changing requirements?", "agility-business-value", "assessor", LIKERT, 1, "authored"),
)

# (id, name, level, principle, limiting, characteristic ids)
PRACTICES = (
    # level 1
    ("reflect-and-tune-process", "Reflect and tune process", 1, "embrace-change", False, ("retrospective-culture",)),
    ("collaborative-planning", "Collaborative planning", 1, "deliver-frequently", False,
     ("transparency-of-management", "small-power-distance", "developers-buy-in", "collaborative-management-style", "management-buy-in")),
    ("collaborative-teams", "Collaborative teams", 1, "human-centric", False, ("team-collaboration-habits",)),
    ("empowered-and-motivated-teams", "Empowered and motivated teams", 1, "human-centric", False,
     ("team-empowerment",)),
    ("coding-standards", "Coding standards", 1, "technical-excellence", False,
     ("coding-standards-benefits-understood", "coding-standards-willingness")),
    ("knowledge-sharing-tools", "Knowledge sharing tools", 1, "technical-excellence", False, ("knowledge-sharing-infrastructure",)),
    ("task-volunteering", "Task volunteering", 1, "technical-excellence", False, ("task-self-selection",)),
    ("customer-commitment-to-work-with-team", "Customer commitment to work with developing team", 1, "customer-collaboration", True,
     ("customer-commitment",)),
    # level 2
    ("evolutionary-requirements", "Evolutionary requirements", 2, "embrace-change", False, ("requirements-flexibility",)),
    ("continuous-delivery", "Continuous delivery", 2, "deliver-frequently", False, ("incremental-release-capability",)),
    ("planning-at-different-levels", "Planning at different levels", 2, "deliver-frequently", False, ("multi-horizon-planning",)),
    ("software-configuration-management", "Software configuration management", 2, "technical-excellence", False, ("version-control-discipline",)),
    ("tracking-iteration-progress", "Tracking iteration progress", 2, "technical-excellence", False, ("progress-visibility",)),
    ("no-big-design-up-front", "No big design up front (BDUF)", 2, "technical-excellence", False, ("incremental-design-acceptance",)),
    ("evolutionary-contract", "Customer contract reflective of evolutionary development", 2, "customer-collaboration", True,
     ("evolutionary-contract-terms",)),
    # level 3
    ("risk-driven-iterations", "Risk driven iterations", 3, "deliver-frequently", False, ("risk-based-prioritization",)),
    ("plan-features-not-tasks", "Plan features not tasks", 3, "deliver-frequently", False, ("feature-oriented-planning",)),
    ("feature-backlog", "Maintain a list of all features and their status (backlog)", 3, "deliver-frequently", False, ("backlog-discipline",)),
    ("self-organizing-teams", "Self organizing teams", 3, "human-centric", False, ("team-self-organization",)),
    ("frequent-face-to-face-communication", "Frequent face-to-face communication", 3, "human-centric", True, ("near-team-proximity",)),
    ("continuous-integration", "Continuous integration", 3, "technical-excellence", False, ("integration-automation",)),
    ("continuous-improvement-refactoring", "Continuous improvement (refactoring)", 3, "technical-excellence", False, ("refactoring-acceptance",)),
    ("unit-tests", "Unit tests", 3, "technical-excellence", False, ("unit-testing-practice",)),
    ("thirty-percent-experienced-people", "30% of level 2 and level 3 people", 3, "technical-excellence", True,
     ("experienced-practitioner-share",)),
    # level 4
    ("client-driven-iterations", "Client driven iterations", 4, "embrace-change", False, ("client-steering",)),
    ("continuous-satisfaction-feedback", "Continuous customer satisfaction feedback", 4, "embrace-change", False, ("satisfaction-feedback-loop",)),
    ("smaller-frequent-releases", "Smaller and more frequent releases (4-8 weeks)", 4, "deliver-frequently", False, ("release-cadence-capability",)),
    ("adaptive-planning", "Adaptive planning", 4, "deliver-frequently", False, ("plan-adaptation",)),
    ("daily-progress-tracking-meetings", "Daily progress tracking meetings", 4, "technical-excellence", False, ("daily-sync-willingness",)),
    ("agile-documentation", "Agile documentation", 4, "technical-excellence", False, ("lean-documentation-attitude",)),
    ("user-stories", "User stories", 4, "technical-excellence", False, ("user-story-readiness",)),
    ("customer-immediately-accessible", "Customer immediately accessible", 4, "customer-collaboration", True,
     ("customer-onsite-availability",)),
    ("collaboration-commitment-contract", "Customer contract revolves around commitment of collaboration", 4, "customer-collaboration", True,
     ("collaborative-contract-terms",)),
    # level 5
    ("low-process-ceremony", "Low process ceremony", 5, "embrace-change", False, ("ceremony-tolerance",)),
    ("agile-project-estimation", "Agile project estimation", 5, "deliver-frequently", False, ("relative-estimation-capability",)),
    ("ideal-agile-physical-setup", "Ideal agile physical setup", 5, "human-centric", True,
     ("physical-workspace-availability", "facilities-investment-willingness")),
    ("test-driven-development", "Test driven development", 5, "technical-excellence", False, ("test-first-readiness",)),
    ("paired-programming", "Paired programming", 5, "technical-excellence", False, ("pairing-acceptance",)),
    ("minimal-low-skill-share", "No/minimal number of level -1 or 1b people on team", 5, "technical-excellence", True,
     ("team-skill-floor",)),
    ("collocated-developers-and-users", "Frequent face-to-face interaction between developers & users (collocated)", 5, "customer-collaboration", True,
     ("developer-user-collocation",)),
)

# (id, name, characteristic ids)
FACTORS = (
    ("inappropriate-need-for-agility", "Inappropriate need for agility", ("agility-business-value",)),
    ("lack-of-sufficient-funds", "Lack of sufficient funds", ("funds-allocated", "funds-spendable")),
    ("absence-of-executive-support", "Absence of executive support", ("executive-sponsorship",)),
)


def document() -> dict[str, Any]:
    """Build the default index as a plain document in the index file format."""
    return {
        "meta": {"name": INDEX_NAME, "version": INDEX_VERSION},
        "levels": [
            {"rank": rank, "name": name, "objective": objective}
            for rank, name, objective in LEVELS
        ],
        "principles": [{"id": pid, "name": name} for pid, name in PRINCIPLES],
        "characteristics": [
            {"id": cid, "description": desc, "scope": scope, "controllable": controllable, "origin": origin}
            for cid, desc, scope, controllable, origin in CHARACTERISTICS
        ],
        "indicators": [
            {
                "id": iid,
                "question": question,
                "characteristic": cid,
                "respondent_role": role,
                "answer_kind": kind,
                "weight": weight,
                "origin": origin,
            }
            for iid, question, cid, role, kind, weight, origin in INDICATORS
        ],
        "practices": [
            {
                "id": pid,
                "name": name,
                "level": level,
                "principle": principle,
                "limiting": limiting,
                "characteristics": list(chars),
            }
            for pid, name, level, principle, limiting, chars in PRACTICES
        ],
        "factors": [
            {"id": fid, "name": name, "characteristics": list(chars)}
            for fid, name, chars in FACTORS
        ],
    }
